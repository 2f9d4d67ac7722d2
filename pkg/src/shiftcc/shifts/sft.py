"""Shifts of finite type presented as de Bruijn graphs on allowed words.

A presentation with window ``k`` keeps the allowed ``(k-1)``-words as
vertices and the allowed ``k``-words as edges (an edge runs from its
prefix to its suffix).  After trimming, bi-infinite paths through the
graph are exactly the points of the subshift, and a word is a factor of
the shift iff all of its ``k``-windows are edges.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..errors import GuardExceeded, InputError
from .alphabet import Alphabet, Word, join_words

DEFAULT_STATE_GUARD = 500_000


@dataclass(frozen=True)
class SftPresentation:
    alphabet: Alphabet
    window: int
    vertices: frozenset[Word]
    edges: frozenset[Word]
    trimmed: bool = True

    def __post_init__(self):
        if self.window < 1:
            raise InputError(f"window must be >= 1, got {self.window}")

    @property
    def is_empty(self) -> bool:
        return not self.edges

    def edge_source(self, edge: Word) -> Word:
        return edge[:-1]

    def edge_target(self, edge: Word) -> Word:
        return edge[1:]

    def successors(self) -> dict[Word, list[Word]]:
        """Map each vertex to its outgoing edges, deterministically ordered."""
        out: dict[Word, list[Word]] = {v: [] for v in self.vertices}
        for e in sorted(self.edges):
            out[e[:-1]].append(e)
        return out


def _trim(vertices: set[Word], edges: set[Word]) -> tuple[frozenset[Word], frozenset[Word]]:
    """Recursively drop vertices missing in- or out-edges."""
    while True:
        has_out = {e[:-1] for e in edges}
        has_in = {e[1:] for e in edges}
        keep = {v for v in vertices if v in has_out and v in has_in}
        if keep == vertices:
            break
        vertices = keep
        edges = {e for e in edges if e[:-1] in keep and e[1:] in keep}
    return frozenset(vertices), frozenset(edges)


def _contains_factor(word: Word, factor: Word) -> bool:
    n, m = len(word), len(factor)
    if m > n:
        return False
    return any(word[i : i + m] == factor for i in range(n - m + 1))


def build_sft(alphabet: Alphabet, forbidden: Iterable[Sequence[str]]) -> SftPresentation:
    """De Bruijn presentation of the shift avoiding the given finite words.

    The window is ``max(1, longest forbidden word)``; the graph is trimmed
    so that every remaining vertex lies on a bi-infinite path.
    """
    forbidden_words = [alphabet.check_word(w) for w in forbidden]
    window = max([1] + [len(w) for w in forbidden_words])

    def allowed(word: Word) -> bool:
        return not any(_contains_factor(word, f) for f in forbidden_words)

    vertices = {w for w in itertools.product(alphabet.symbols, repeat=window - 1) if allowed(w)}
    edges = {
        w
        for w in itertools.product(alphabet.symbols, repeat=window)
        if w[:-1] in vertices and w[1:] in vertices and allowed(w)
    }
    v, e = _trim(vertices, edges)
    return SftPresentation(alphabet=alphabet, window=window, vertices=v, edges=e)


def full_shift(alphabet: Alphabet) -> SftPresentation:
    return build_sft(alphabet, [])


def count_words(shift: SftPresentation, n: int) -> int:
    """Exact number of distinct length-``n`` factors (arbitrary precision).

    For a trimmed de Bruijn presentation the word of a path determines the
    path, so path counting by integer matrix-vector products is exact.
    """
    if n < 0:
        raise InputError(f"word length must be >= 0, got {n}")
    if shift.is_empty:
        return 0
    k = shift.window
    if n < k - 1:
        seen = {v[i : i + n] for v in shift.vertices for i in range(k - 1 - n + 1)}
        return len(seen)
    verts = sorted(shift.vertices)
    index = {v: i for i, v in enumerate(verts)}
    # pred[i] = indices of vertices with an edge into i; counts[i] tracks the
    # number of paths of the current length ending at i
    pred: dict[int, list[int]] = {i: [] for i in range(len(verts))}
    for e in shift.edges:
        pred[index[e[1:]]].append(index[e[:-1]])
    counts = [1] * len(verts)
    for _ in range(n - (k - 1)):
        counts = [sum(counts[j] for j in pred[i]) for i in range(len(verts))]
    return sum(counts)


def factors(shift: SftPresentation, n: int) -> set[Word]:
    """All length-``n`` factors of the shift, materialized."""
    if shift.is_empty:
        return set()
    k = shift.window
    if n < k - 1:
        return {v[i : i + n] for v in shift.vertices for i in range(k - 1 - n + 1)}
    succ = shift.successors()
    # frontier maps each vertex to the words of the current length that end there
    frontier: dict[Word, set[Word]] = {v: {v} for v in shift.vertices}
    for _ in range(n - (k - 1)):
        nxt: dict[Word, set[Word]] = {}
        for v, ws in frontier.items():
            for e in succ[v]:
                nxt.setdefault(e[1:], set()).update(w + (e[-1],) for w in ws)
        frontier = nxt
    return set().union(*frontier.values()) if frontier else set()


def word_in_shift(shift: SftPresentation, word: Sequence[str]) -> bool:
    """Factor test: every window of the word must be an edge of the trimmed graph."""
    w = tuple(word)
    if shift.is_empty:
        return False
    k = shift.window
    if len(w) < k - 1:
        return any(v[i : i + len(w)] == w for v in shift.vertices for i in range(k - len(w)))
    if len(w) == k - 1:
        return w in shift.vertices
    return all(w[i : i + k] in shift.edges for i in range(len(w) - k + 1))


def with_window(shift: SftPresentation, window: int, guard: int = DEFAULT_STATE_GUARD) -> SftPresentation:
    """Re-present the same shift with a larger window (higher-block recoding)."""
    if window < shift.window:
        raise InputError(f"cannot shrink window {shift.window} to {window}")
    if window == shift.window:
        return shift
    if shift.is_empty:
        return SftPresentation(shift.alphabet, window, frozenset(), frozenset())
    new_edges = factors(shift, window)
    if len(new_edges) > guard:
        raise GuardExceeded(
            f"re-windowing would create {len(new_edges)} edges (guard {guard})",
            requested=len(new_edges),
            limit=guard,
        )
    new_vertices = factors(shift, window - 1)
    v, e = _trim(set(new_vertices), set(new_edges))
    return SftPresentation(shift.alphabet, window, v, e)


def product_shift(
    left: SftPresentation, right: SftPresentation, guard: int = DEFAULT_STATE_GUARD
) -> SftPresentation:
    """Shift of paired points over the product alphabet.

    Points of the result are exactly pairs of points; the window is the
    larger of the two constituent windows.
    """
    window = max(left.window, right.window)
    a = with_window(left, window, guard=guard)
    b = with_window(right, window, guard=guard)
    alphabet = _paired_alphabet(left.alphabet, right.alphabet)
    if a.is_empty or b.is_empty:
        return SftPresentation(alphabet, window, frozenset(), frozenset())
    if len(a.edges) * len(b.edges) > guard:
        raise GuardExceeded(
            f"product would have {len(a.edges) * len(b.edges)} edges (guard {guard})",
            requested=len(a.edges) * len(b.edges),
            limit=guard,
        )
    vertices = {join_words(u, v) for u in a.vertices for v in b.vertices}
    edges = {join_words(e, f) for e in a.edges for f in b.edges}
    v, e = _trim(vertices, edges)
    return SftPresentation(alphabet, window, v, e)


def _paired_alphabet(a: Alphabet, b: Alphabet) -> Alphabet:
    from .alphabet import product_alphabet

    return product_alphabet(a, b)


def diagonal_shift(shift: SftPresentation) -> SftPresentation:
    """The shift of pairs ``(t, t)`` over the paired alphabet, presented like ``shift``."""
    alphabet = _paired_alphabet(shift.alphabet, shift.alphabet)
    vertices = frozenset(join_words(v, v) for v in shift.vertices)
    edges = frozenset(join_words(e, e) for e in shift.edges)
    return SftPresentation(alphabet, shift.window, vertices, edges)
