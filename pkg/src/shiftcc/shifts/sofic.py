"""Sofic shifts as edge-labeled graphs, with exact language comparison.

Factor languages of sofic shifts are regular, so language questions are
settled with automata: treat the trimmed labeled graph as an NFA whose
states are all initial and all accepting, determinize by the subset
construction, minimize, and compare canonical forms.  Equality of the
canonical partial DFAs is equality of the factor languages, hence of the
shifts.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from ..errors import GuardExceeded, InputError
from .alphabet import Alphabet, Word, join_tokens, split_tokens
from .entropy import EntropyValue, log2_spectral_radius
from .sft import DEFAULT_STATE_GUARD, SftPresentation

State = Hashable
Edge = tuple[State, str, State]


@dataclass(frozen=True)
class SoficPresentation:
    alphabet: Alphabet
    states: frozenset
    edges: frozenset  # of (state, label, state)
    trimmed: bool = True

    def __post_init__(self):
        for _, label, _ in self.edges:
            if label not in self.alphabet:
                raise InputError(f"edge label {label!r} not in alphabet")

    @property
    def is_empty(self) -> bool:
        return not self.edges

    def successors(self) -> dict[State, list[Edge]]:
        out: dict[State, list[Edge]] = {s: [] for s in self.states}
        for e in self.edges:
            out[e[0]].append(e)
        return out


def trim_sofic(p: SoficPresentation) -> SoficPresentation:
    """Drop states that do not lie on a bi-infinite path."""
    states, edges = set(p.states), set(p.edges)
    while True:
        has_out = {e[0] for e in edges}
        has_in = {e[2] for e in edges}
        keep = {s for s in states if s in has_out and s in has_in}
        if keep == states:
            break
        states = keep
        edges = {e for e in edges if e[0] in keep and e[2] in keep}
    return SoficPresentation(p.alphabet, frozenset(states), frozenset(edges), trimmed=True)


def make_sofic(alphabet: Alphabet, edges: Iterable[Edge]) -> SoficPresentation:
    edges = frozenset(edges)
    states = frozenset(s for e in edges for s in (e[0], e[2]))
    return trim_sofic(SoficPresentation(alphabet, states, edges, trimmed=False))


def sofic_from_sft(shift: SftPresentation) -> SoficPresentation:
    """Label each de Bruijn edge with its last symbol; the language is unchanged."""
    edges = {(e[:-1], e[-1], e[1:]) for e in shift.edges}
    return SoficPresentation(shift.alphabet, frozenset(shift.vertices), frozenset(edges))


def as_sofic(p: SftPresentation | SoficPresentation) -> SoficPresentation:
    return sofic_from_sft(p) if isinstance(p, SftPresentation) else trim_sofic(p)


# ---------------------------------------------------------------------------
# Determinization, minimization, canonical forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Dfa:
    """Partial DFA over integer states; every state accepts."""

    alphabet: tuple[str, ...]
    n_states: int
    start: int  # -1 encodes the empty language
    transitions: dict[tuple[int, str], int]


def determinize(p: SoficPresentation, guard: int = DEFAULT_STATE_GUARD) -> _Dfa:
    """Subset construction from the all-states start set."""
    p = p if p.trimmed else trim_sofic(p)
    symbols = tuple(sorted(p.alphabet.symbols))
    if p.is_empty:
        return _Dfa(symbols, 0, -1, {})
    by_label: dict[tuple[State, str], set[State]] = {}
    for s, a, t in p.edges:
        by_label.setdefault((s, a), set()).add(t)
    start = frozenset(p.states)
    ids: dict[frozenset, int] = {start: 0}
    queue = deque([start])
    transitions: dict[tuple[int, str], int] = {}
    while queue:
        subset = queue.popleft()
        sid = ids[subset]
        for a in symbols:
            target = set()
            for s in subset:
                target |= by_label.get((s, a), set())
            if not target:
                continue
            tkey = frozenset(target)
            if tkey not in ids:
                if len(ids) >= guard:
                    raise GuardExceeded(
                        f"determinization exceeded {guard} states", limit=guard
                    )
                ids[tkey] = len(ids)
                queue.append(tkey)
            transitions[(sid, a)] = ids[tkey]
    return _Dfa(symbols, len(ids), 0, transitions)


def minimize(dfa: _Dfa) -> _Dfa:
    """Moore refinement on the partial DFA (implicit non-accepting sink)."""
    if dfa.start == -1:
        return dfa
    n = dfa.n_states
    block = [0] * n
    while True:
        signatures = {}
        new_block = [0] * n
        for s in range(n):
            sig = (
                block[s],
                tuple(
                    block[dfa.transitions[(s, a)]] if (s, a) in dfa.transitions else -1
                    for a in dfa.alphabet
                ),
            )
            if sig not in signatures:
                signatures[sig] = len(signatures)
            new_block[s] = signatures[sig]
        if new_block == block:
            break
        block = new_block
    n_blocks = max(block) + 1
    transitions = {}
    for (s, a), t in dfa.transitions.items():
        transitions[(block[s], a)] = block[t]
    return _Dfa(dfa.alphabet, n_blocks, block[dfa.start], transitions)


def canonical_dfa_key(dfa: _Dfa):
    """Relabel states by BFS from the start in alphabet order; structural key."""
    if dfa.start == -1:
        return ("empty", dfa.alphabet)
    order = {dfa.start: 0}
    queue = deque([dfa.start])
    while queue:
        s = queue.popleft()
        for a in dfa.alphabet:
            t = dfa.transitions.get((s, a))
            if t is not None and t not in order:
                order[t] = len(order)
                queue.append(t)
    table = []
    inverse = sorted(order, key=order.get)
    for s in inverse:
        table.append(tuple(order.get(dfa.transitions.get((s, a))) for a in dfa.alphabet))
    return (len(order), dfa.alphabet, tuple(table))


def canonical_form(p: SftPresentation | SoficPresentation, guard: int = DEFAULT_STATE_GUARD):
    return canonical_dfa_key(minimize(determinize(as_sofic(p), guard=guard)))


def sofic_equal(
    a: SftPresentation | SoficPresentation,
    b: SftPresentation | SoficPresentation,
    guard: int = DEFAULT_STATE_GUARD,
) -> bool:
    """Exact equality of factor languages (hence of the shifts)."""
    ga, gb = as_sofic(a), as_sofic(b)
    if set(ga.alphabet.symbols) != set(gb.alphabet.symbols):
        raise InputError("sofic_equal requires presentations over the same alphabet")
    return canonical_form(ga, guard=guard) == canonical_form(gb, guard=guard)


def find_separating_word(
    a: SftPresentation | SoficPresentation,
    b: SftPresentation | SoficPresentation,
    guard: int = DEFAULT_STATE_GUARD,
) -> Word | None:
    """Shortest word in exactly one of the two factor languages, or None."""
    da = minimize(determinize(as_sofic(a), guard=guard))
    db = minimize(determinize(as_sofic(b), guard=guard))
    symbols = tuple(sorted(set(da.alphabet) | set(db.alphabet)))
    start = (da.start, db.start)
    if (da.start == -1) != (db.start == -1):
        return ()  # one language is empty, the other contains the empty word
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (sa, sb), word = queue.popleft()
        for sym in symbols:
            ta = da.transitions.get((sa, sym), -1) if sa != -1 else -1
            tb = db.transitions.get((sb, sym), -1) if sb != -1 else -1
            if (ta == -1) != (tb == -1):
                return word + (sym,)
            if ta == -1 and tb == -1:
                continue
            key = (ta, tb)
            if key not in seen:
                seen.add(key)
                queue.append((key, word + (sym,)))
    return None


def language_contains(
    big: SftPresentation | SoficPresentation,
    small: SftPresentation | SoficPresentation,
    guard: int = DEFAULT_STATE_GUARD,
) -> Word | None:
    """None if L(small) is a subset of L(big), else a witness word in the difference."""
    dsmall = minimize(determinize(as_sofic(small), guard=guard))
    dbig = minimize(determinize(as_sofic(big), guard=guard))
    if dsmall.start == -1:
        return None
    if dbig.start == -1:
        return ()
    symbols = tuple(sorted(set(dsmall.alphabet) | set(dbig.alphabet)))
    seen = {(dsmall.start, dbig.start)}
    queue = deque([((dsmall.start, dbig.start), ())])
    while queue:
        (ss, sb), word = queue.popleft()
        for sym in symbols:
            ts = dsmall.transitions.get((ss, sym))
            if ts is None:
                continue
            tb = dbig.transitions.get((sb, sym)) if sb != -1 else None
            if tb is None:
                return word + (sym,)
            if (ts, tb) not in seen:
                seen.add((ts, tb))
                queue.append(((ts, tb), word + (sym,)))
    return None


# ---------------------------------------------------------------------------
# Language operations
# ---------------------------------------------------------------------------


def sofic_intersection(
    a: SftPresentation | SoficPresentation,
    b: SftPresentation | SoficPresentation,
) -> SoficPresentation:
    """Label-synchronized product; after trimming it presents the intersection."""
    ga, gb = as_sofic(a), as_sofic(b)
    symbols = tuple(sorted(set(ga.alphabet.symbols) & set(gb.alphabet.symbols)))
    if not symbols:
        raise InputError("intersection over disjoint alphabets")
    alphabet = Alphabet(symbols)
    by_label: dict[str, list[Edge]] = {}
    for e in gb.edges:
        by_label.setdefault(e[1], []).append(e)
    edges = set()
    for s, lab, t in ga.edges:
        for s2, _, t2 in by_label.get(lab, ()):
            edges.add(((s, s2), lab, (t, t2)))
    return make_sofic(alphabet, edges)


def relabel(p: SoficPresentation, mapping, alphabet: Alphabet) -> SoficPresentation:
    """Apply a token map to every edge label (graph projection)."""
    edges = {(s, mapping(lab), t) for s, lab, t in p.edges}
    return trim_sofic(SoficPresentation(alphabet, p.states, frozenset(edges), trimmed=p.trimmed))


def project_tracks(p: SoficPresentation, tracks: Sequence[int], alphabet: Alphabet) -> SoficPresentation:
    """Keep only the selected component tracks of a product-alphabet presentation."""

    def mapping(token: str) -> str:
        parts = split_tokens(token)
        return join_tokens([parts[i] for i in tracks]) if len(tracks) > 1 else parts[tracks[0]]

    return relabel(p, mapping, alphabet)


def sofic_word_in_language(p: SoficPresentation, word: Sequence[str]) -> bool:
    p = p if p.trimmed else trim_sofic(p)
    if p.is_empty:
        return False
    by_label: dict[tuple[State, str], set[State]] = {}
    for s, a, t in p.edges:
        by_label.setdefault((s, a), set()).add(t)
    current = set(p.states)
    for sym in word:
        nxt = set()
        for s in current:
            nxt |= by_label.get((s, sym), set())
        if not nxt:
            return False
        current = nxt
    return True


def sofic_factors(p: SoficPresentation, n: int, guard: int = DEFAULT_STATE_GUARD) -> set[Word]:
    """All length-``n`` words of the factor language, materialized."""
    dfa = determinize(as_sofic(p), guard=guard)
    if dfa.start == -1:
        return set()
    frontier: dict[int, set[Word]] = {dfa.start: {()}}
    for _ in range(n):
        nxt: dict[int, set[Word]] = {}
        total = 0
        for s, ws in frontier.items():
            for a in dfa.alphabet:
                t = dfa.transitions.get((s, a))
                if t is not None:
                    bucket = nxt.setdefault(t, set())
                    bucket.update(w + (a,) for w in ws)
                    total += len(bucket)
        if total > guard:
            raise GuardExceeded(f"factor enumeration exceeded {guard} words", limit=guard)
        frontier = nxt
    return set().union(*frontier.values()) if frontier else set()


def sofic_count_words(p: SoficPresentation, n: int, guard: int = DEFAULT_STATE_GUARD) -> int:
    """Exact factor count via the determinized automaton (paths from the start)."""
    if n < 0:
        raise InputError(f"word length must be >= 0, got {n}")
    dfa = determinize(as_sofic(p), guard=guard)
    if dfa.start == -1:
        return 0
    counts = {dfa.start: 1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for s, c in counts.items():
            for a in dfa.alphabet:
                t = dfa.transitions.get((s, a))
                if t is not None:
                    nxt[t] = nxt.get(t, 0) + c
        counts = nxt
    return sum(counts.values())


def sofic_entropy(p: SftPresentation | SoficPresentation, tol: float = 1e-9,
                  guard: int = DEFAULT_STATE_GUARD) -> EntropyValue:
    """Entropy of the presented sofic shift.

    Determinization first: in a deterministic presentation distinct paths
    from a state spell distinct words, so the adjacency growth rate is the
    word growth rate.
    """
    dfa = minimize(determinize(as_sofic(p), guard=guard))
    if dfa.start == -1:
        return EntropyValue.empty()
    succ_counts: dict[int, dict[int, int]] = {}
    for (s, _), t in dfa.transitions.items():
        row = succ_counts.setdefault(s, {})
        row[t] = row.get(t, 0) + 1
    bits = log2_spectral_radius(dfa.n_states, succ_counts, tol)
    if bits == float("-inf"):
        return EntropyValue.empty()
    return EntropyValue(max(0.0, bits))


# ---------------------------------------------------------------------------
# Block codes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockCode:
    """Sliding-window local rule: maps (2*radius + 1)-words to output symbols."""

    radius: int
    rule: dict[Word, str]
    target: Alphabet

    def __post_init__(self):
        if self.radius < 0:
            raise InputError(f"radius must be >= 0, got {self.radius}")

    @classmethod
    def from_function(cls, radius: int, source: Alphabet, fn, target: Alphabet | None = None) -> "BlockCode":
        rule = {
            w: fn(w)
            for w in itertools.product(source.symbols, repeat=2 * radius + 1)
        }
        if target is None:
            target = Alphabet(tuple(dict.fromkeys(rule.values())))
        return cls(radius, rule, target)

    def apply_to_word(self, word: Word) -> str:
        width = 2 * self.radius + 1
        if len(word) != width:
            raise InputError(f"rule window must have length {width}, got {len(word)}")
        try:
            return self.rule[word]
        except KeyError:
            raise InputError(f"block code rule undefined on admissible window {word}") from None


def identity_code(alphabet: Alphabet) -> BlockCode:
    return BlockCode(0, {(s,): s for s in alphabet.symbols}, alphabet)


def apply_block_code(
    code: BlockCode,
    shift: SftPresentation | SoficPresentation,
    guard: int = DEFAULT_STATE_GUARD,
) -> SoficPresentation:
    """Presentation of the image shift under the sliding-window code.

    States are paths of 2*radius edges of the source presentation; each
    one-edge extension emits the rule applied to its (2*radius+1)-letter
    window, so label sequences of bi-infinite paths are exactly the image
    points (up to an index shift, which is immaterial for shift spaces).
    """
    g = as_sofic(shift)
    if g.is_empty:
        return SoficPresentation(code.target, frozenset(), frozenset())
    width = 2 * code.radius + 1
    succ = g.successors()
    # paths of (width - 1) edges, stored as (start_state, edge tuple)
    paths: list[tuple[State, tuple[Edge, ...]]] = [(s, ()) for s in g.states]
    for _ in range(width - 1):
        nxt = []
        for start, es in paths:
            tail = es[-1][2] if es else start
            for e in succ[tail]:
                nxt.append((start, es + (e,)))
            if len(nxt) > guard:
                raise GuardExceeded(f"block code expansion exceeded {guard} states", limit=guard)
        paths = nxt
    edges = set()
    for start, es in paths:
        tail = es[-1][2] if es else start
        for e in succ[tail]:
            full = es + (e,)
            label = code.apply_to_word(tuple(edge[1] for edge in full))
            if width == 1:
                edges.add((start, label, e[2]))
            else:
                edges.add(((start, es), label, (full[0][2], full[1:])))
    return make_sofic(code.target, edges)
