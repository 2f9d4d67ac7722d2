"""Infinite nondeterministic protocols over subshifts.

A protocol for a shift S of pairs is a triple (Z, S_X, S_Y) of shifts
such that (x, y) lies in S exactly when some z in Z satisfies
(x, z) in S_X and (y, z) in S_Y; its size is the entropy of Z.  Because
factor languages determine shift spaces, a protocol is validated exactly
by building the shift L of witnessing triples (x, y, z), projecting away
the z track, and comparing languages with the target S.

The module also provides the two bridges between finite and infinite
complexity: lifting a finite rectangle cover of a tensor power R^n to a
protocol for the coordinatewise-infinite relation (blank-padded marker
messages), and extracting from a finite-type protocol a finite protocol
for R^n whose messages are admissible n-words of Z plus short border
exchanges.  Lower-bound machinery (periodic-point conditional entropy,
fooling certificates, common factors) rounds out the toolkit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import GuardExceeded, InputError
from .finite_cc import CoverResult, Rectangle, RelationMatrix, verify_cover
from .shifts import (
    Alphabet,
    BlockCode,
    SftPresentation,
    SoficPresentation,
    Word,
    apply_block_code,
    as_sofic,
    build_sft,
    count_words,
    diagonal_shift,
    entropy,
    factors,
    find_separating_word,
    full_shift,
    join_tokens,
    join_words,
    language_contains,
    make_sofic,
    product_alphabet,
    product_shift,
    project_tracks,
    sofic_factors,
    split_tokens,
    word_in_shift,
)
from .shifts.entropy import log2_spectral_radius_matrix
from .shifts.sft import DEFAULT_STATE_GUARD

Presentation = SftPresentation | SoficPresentation


# ---------------------------------------------------------------------------
# Protocol data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProtocolTriple:
    """Message shift Z over C, with constraint shifts S_X over AxC and S_Y over BxC."""

    z: Presentation
    s_x: Presentation
    s_y: Presentation
    a: Alphabet
    b: Alphabet
    c: Alphabet

    def __post_init__(self):
        _check_product_tokens(self.s_x.alphabet, (self.a, self.c), "S_X")
        _check_product_tokens(self.s_y.alphabet, (self.b, self.c), "S_Y")
        for tok in self.z.alphabet:
            if tok not in self.c:
                raise InputError(f"Z uses symbol {tok!r} outside alphabet C")

    @property
    def is_finite_type(self) -> bool:
        return all(isinstance(p, SftPresentation) for p in (self.z, self.s_x, self.s_y))


def _check_product_tokens(alphabet: Alphabet, components: tuple[Alphabet, ...], name: str):
    for tok in alphabet:
        parts = split_tokens(tok)
        if len(parts) != len(components):
            raise InputError(f"{name} token {tok!r} does not split into {len(components)} tracks")
        for part, comp in zip(parts, components):
            if part not in comp:
                raise InputError(f"{name} token {tok!r} has component {part!r} outside its alphabet")


@dataclass(frozen=True)
class ProtocolLanguage:
    """The shift of accepted triples (x, y, z), over the joined A,B,C alphabet."""

    graph: SoficPresentation
    window: int | None  # max constituent window for finite-type protocols


@dataclass(frozen=True)
class PeriodicWord:
    period: int
    cycle: Word

    def __post_init__(self):
        if self.period < 1 or len(self.cycle) != self.period:
            raise InputError(f"cycle length {len(self.cycle)} must equal period {self.period}")

    def symbol_at(self, i: int) -> str:
        return self.cycle[i % self.period]


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    witness: Word | None  # word in the symmetric difference of factor languages
    entropy_z: float


# ---------------------------------------------------------------------------
# Protocol language and validation
# ---------------------------------------------------------------------------


def protocol_language(protocol: ProtocolTriple, guard: int = DEFAULT_STATE_GUARD) -> ProtocolLanguage:
    """Synchronize Z, S_X and S_Y on the shared z track."""
    gz, gx, gy = as_sofic(protocol.z), as_sofic(protocol.s_x), as_sofic(protocol.s_y)
    x_by_c: dict[str, list] = {}
    for s, lab, t in gx.edges:
        a_part, c_part = split_tokens(lab)
        x_by_c.setdefault(c_part, []).append((s, a_part, t))
    y_by_c: dict[str, list] = {}
    for s, lab, t in gy.edges:
        b_part, c_part = split_tokens(lab)
        y_by_c.setdefault(c_part, []).append((s, b_part, t))
    alphabet = product_alphabet(protocol.a, protocol.b, protocol.c)
    edges = set()
    for zs, c_part, zt in gz.edges:
        for xs, a_part, xt in x_by_c.get(c_part, ()):
            for ys, b_part, yt in y_by_c.get(c_part, ()):
                edges.add(
                    ((zs, xs, ys), join_tokens((a_part, b_part, c_part)), (zt, xt, yt))
                )
                if len(edges) > guard:
                    raise GuardExceeded(f"protocol language exceeded {guard} edges", limit=guard)
    graph = make_sofic(alphabet, edges)
    window = None
    if protocol.is_finite_type:
        window = max(protocol.z.window, protocol.s_x.window, protocol.s_y.window)
    return ProtocolLanguage(graph, window)


def protocol_validate(
    target: Presentation, protocol: ProtocolTriple, tol: float = 1e-9,
    guard: int = DEFAULT_STATE_GUARD,
) -> ValidationReport:
    """Exact validation: the (x, y) projection of L must equal the target language."""
    _check_product_tokens(target.alphabet, (protocol.a, protocol.b), "target")
    language = protocol_language(protocol, guard=guard)
    pair_alphabet = product_alphabet(protocol.a, protocol.b)
    projected = project_tracks(language.graph, [0, 1], pair_alphabet)
    target_graph = as_sofic(target)
    witness = find_separating_word(projected, target_graph, guard=guard)
    return ValidationReport(
        valid=witness is None,
        witness=witness,
        entropy_z=float(entropy(protocol.z, tol)),
    )


# ---------------------------------------------------------------------------
# Canonical protocols
# ---------------------------------------------------------------------------


def eq_shift(shift: Presentation) -> Presentation:
    """The diagonal pairs (t, t) of a shift, over the paired alphabet."""
    if isinstance(shift, SftPresentation):
        return diagonal_shift(shift)
    alphabet = product_alphabet(shift.alphabet, shift.alphabet)
    edges = {(s, join_tokens((lab, lab)), t) for s, lab, t in shift.edges}
    return make_sofic(alphabet, edges)


def eq_protocol(shift: Presentation) -> ProtocolTriple:
    """Alice sends her input: Z is the shift itself, both constraints diagonal."""
    graph = as_sofic(shift)
    if graph.is_empty:
        raise InputError("eq protocol needs a nonempty shift")
    return ProtocolTriple(
        z=shift,
        s_x=eq_shift(shift),
        s_y=eq_shift(shift),
        a=shift.alphabet,
        b=shift.alphabet,
        c=shift.alphabet,
    )


def trivial_protocol(x: Presentation, y: Presentation) -> ProtocolTriple:
    """Zero-entropy protocol for the full product: Z is a single fixed point."""
    marker = Alphabet.of(["0"])
    z = full_shift(marker)
    if isinstance(x, SftPresentation) and isinstance(y, SftPresentation):
        s_x: Presentation = product_shift(x, z)
        s_y: Presentation = product_shift(y, z)
    else:
        gx, gy = as_sofic(x), as_sofic(y)
        s_x = make_sofic(
            product_alphabet(x.alphabet, marker),
            {(s, join_tokens((lab, "0")), t) for s, lab, t in gx.edges},
        )
        s_y = make_sofic(
            product_alphabet(y.alphabet, marker),
            {(s, join_tokens((lab, "0")), t) for s, lab, t in gy.edges},
        )
    return ProtocolTriple(z=z, s_x=s_x, s_y=s_y, a=x.alphabet, b=y.alphabet, c=marker)


def relation_shift(relation: RelationMatrix) -> SftPresentation:
    """The window-1 shift of pairs whose every coordinate is related (R^Z)."""
    if relation.is_empty:
        raise InputError("relation shift of the empty relation is empty")
    a = Alphabet.of(relation.x_labels)
    b = Alphabet.of(relation.y_labels)
    alphabet = product_alphabet(a, b)
    allowed = {
        join_tokens((relation.x_labels[i], relation.y_labels[j]))
        for i, j in relation.ones
    }
    forbidden = [(tok,) for tok in alphabet.symbols if tok not in allowed]
    return build_sft(alphabet, forbidden)


# ---------------------------------------------------------------------------
# Lift: finite cover of R^n  ->  protocol for R^Z
# ---------------------------------------------------------------------------

BLANK = "_"


def lift_protocol(
    relation: RelationMatrix, cover: CoverResult, n: int,
    guard: int = DEFAULT_STATE_GUARD,
) -> ProtocolTriple:
    """Blank-padded lift of a cover of R^n to a protocol for R^Z.

    Messages are bi-infinite words carrying one rectangle index every n
    positions (blanks elsewhere), so the message shift has entropy
    log2(#rectangles) / n.  At each marker the local n-block of Alice's
    (resp. Bob's) input must lie in the marked rectangle's rows (resp.
    columns).
    """
    if n < 1:
        raise InputError(f"lift needs n >= 1, got {n}")
    from .finite_cc import tensor_power

    power = tensor_power(relation, n) if n > 1 else relation
    try:
        verify_cover(power, cover.rectangles)
    except InputError as exc:
        raise InputError(f"not a valid cover of R^{n}: {exc}") from exc

    a = Alphabet.of(relation.x_labels)
    b = Alphabet.of(relation.y_labels)
    markers = [f"z{t}" for t in range(len(cover.rectangles))]
    c = Alphabet.of(markers + [BLANK])

    z_forbidden: list[Word] = [(BLANK,) * n]
    for gap in range(n - 1):
        for m1 in markers:
            for m2 in markers:
                z_forbidden.append((m1,) + (BLANK,) * gap + (m2,))
    z_prime = build_sft(c, z_forbidden)

    def decode(label: str) -> Word:
        return split_tokens(label) if n > 1 else (label,)

    row_words = [
        {decode(power.x_labels[i]) for i in rect.rows} for rect in cover.rectangles
    ]
    col_words = [
        {decode(power.y_labels[j]) for j in rect.cols} for rect in cover.rectangles
    ]
    s_x = _lift_side(a, c, markers, z_forbidden, row_words, n, guard)
    s_y = _lift_side(b, c, markers, z_forbidden, col_words, n, guard)
    return ProtocolTriple(z=z_prime, s_x=s_x, s_y=s_y, a=a, b=b, c=c)


def _lift_side(
    side: Alphabet, c: Alphabet, markers: list[str], z_forbidden: list[Word],
    block_words: list[set[Word]], n: int, guard: int,
) -> SftPresentation:
    alphabet = product_alphabet(side, c)
    if len(side) ** n * len(c) ** n > guard:
        raise GuardExceeded(f"lift side would enumerate more than {guard} words", limit=guard)
    forbidden: list[Word] = []
    # inherit the marker-spacing constraints on the c track
    for f in z_forbidden:
        for side_word in itertools.product(side.symbols, repeat=len(f)):
            forbidden.append(join_words(side_word, f))
    # a marker starting an n-window pins the local block to its rectangle
    for t, marker in enumerate(markers):
        for side_word in itertools.product(side.symbols, repeat=n):
            if side_word in block_words[t]:
                continue
            for c_rest in itertools.product(c.symbols, repeat=n - 1):
                forbidden.append(join_words(side_word, (marker,) + c_rest))
    return build_sft(alphabet, forbidden)


# ---------------------------------------------------------------------------
# Extract: finite-type protocol  ->  finite protocol for R^n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtractedProtocol:
    """Finite protocol certificate for R^n, with the stated bit accounting."""

    n: int
    window: int  # the r of the border exchanges
    accepted: RelationMatrix
    cover: CoverResult
    message_count: int
    bits_reported: float  # log2(c_n(Z)) + 4 log2(r), as stated


def extract_protocol(
    protocol: ProtocolTriple, n: int, guard: int = DEFAULT_STATE_GUARD
) -> ExtractedProtocol:
    """Finite protocol for R^n from a finite-type protocol for R^Z.

    A message is an admissible n-word of Z together with the first and
    last ``r`` letters of both inputs; each side checks its own pair word
    against its constraint shift and the borders against the language of
    accepted triples.
    """
    if not protocol.is_finite_type:
        raise InputError("extraction requires a finite-type protocol")
    language = protocol_language(protocol, guard=guard)
    r = language.window
    if n < r:
        raise InputError(f"extraction needs n >= window r = {r}, got n = {n}")
    z_words = sorted(factors(protocol.z, n))
    if not z_words:
        raise InputError("message shift has no admissible words")
    x_blocks = sorted(itertools.product(protocol.a.symbols, repeat=n))
    y_blocks = sorted(itertools.product(protocol.b.symbols, repeat=n))
    if len(x_blocks) * len(y_blocks) > guard:
        raise GuardExceeded(f"extraction grid exceeds {guard} pairs", limit=guard)

    def in_language(word: Word) -> bool:
        from .shifts import sofic_word_in_language

        return sofic_word_in_language(language.graph, word)

    alice_ok = {
        (x, z): word_in_shift(protocol.s_x, join_words(x, z))
        for x in x_blocks
        for z in z_words
    }
    bob_ok = {
        (y, z): word_in_shift(protocol.s_y, join_words(y, z))
        for y in y_blocks
        for z in z_words
    }

    rectangles: list[Rectangle] = []
    accepted = np.zeros((len(x_blocks), len(y_blocks)), dtype=bool)
    x_index = {x: i for i, x in enumerate(x_blocks)}
    y_index = {y: j for j, y in enumerate(y_blocks)}
    message_count = 0
    for z in z_words:
        rows_by_border: dict[tuple[Word, Word], list[Word]] = {}
        for x in x_blocks:
            if alice_ok[(x, z)]:
                rows_by_border.setdefault((x[:r], x[-r:]), []).append(x)
        cols_by_border: dict[tuple[Word, Word], list[Word]] = {}
        for y in y_blocks:
            if bob_ok[(y, z)]:
                cols_by_border.setdefault((y[:r], y[-r:]), []).append(y)
        for (x_first, x_last), xs in rows_by_border.items():
            for (y_first, y_last), ys in cols_by_border.items():
                if not in_language(join_words(x_first, y_first, z[:r])):
                    continue
                if not in_language(join_words(x_last, y_last, z[-r:])):
                    continue
                message_count += 1
                rect = Rectangle(
                    frozenset(x_index[x] for x in xs),
                    frozenset(y_index[y] for y in ys),
                )
                rectangles.append(rect)
                accepted[np.ix_(sorted(rect.rows), sorted(rect.cols))] = True

    accepted_relation = RelationMatrix(
        accepted,
        tuple(join_tokens(x) for x in x_blocks),
        tuple(join_tokens(y) for y in y_blocks),
    )
    unique = sorted(set(rectangles), key=Rectangle.sort_key)
    cover = CoverResult(
        tuple(unique), len(unique), math.log2(len(unique)) if unique else float("-inf"), False
    )
    verify_cover(accepted_relation, unique)
    c_n = count_words(protocol.z, n)
    bits = math.log2(c_n) + 4 * math.log2(r)
    return ExtractedProtocol(
        n=n,
        window=r,
        accepted=accepted_relation,
        cover=cover,
        message_count=message_count,
        bits_reported=bits,
    )


# ---------------------------------------------------------------------------
# Conditional entropy at periodic points
# ---------------------------------------------------------------------------


def conditional_entropy(
    shift: SftPresentation, x: PeriodicWord, tol: float = 1e-9
) -> float:
    """Growth rate of the y-words compatible with the periodic input x.

    Computed as (1/p) log2 of the spectral radius of the product of the p
    position-restricted transfer matrices; equal to the limsup of
    log2(c_n(x))/n because the de Bruijn labeling is path-injective.
    """
    if not isinstance(shift, SftPresentation):
        raise InputError("conditional entropy requires a finite-type pair shift")
    p = x.period
    verts = sorted(shift.vertices)
    index = {v: i for i, v in enumerate(verts)}
    k = shift.window
    a_alphabet = {split_tokens(tok)[0] for tok in shift.alphabet}
    for sym in x.cycle:
        if sym not in a_alphabet:
            raise InputError(f"periodic symbol {sym!r} not in the x-side alphabet")
    if shift.is_empty:
        raise InputError("periodic word is not admissible in the empty shift")

    matrices = []
    for t in range(p):
        m = np.zeros((len(verts), len(verts)))
        required = tuple(x.symbol_at(t - k + 1 + i) for i in range(k))
        for e in shift.edges:
            if tuple(split_tokens(tok)[0] for tok in e) == required:
                m[index[e[:-1]], index[e[1:]]] += 1.0
        matrices.append(m)
    product = np.eye(len(verts))
    for m in matrices:
        product = product @ m
    bits = log2_spectral_radius_matrix(product, tol * p)
    if bits == float("-inf"):
        raise InputError(f"periodic word {x.cycle} is not admissible in the x projection")
    return bits / p


@dataclass(frozen=True)
class ConditionalEntropyReport:
    """Periodic-point estimate of sup_x H(Y|x); not certified as the true sup."""

    sup_estimate: float
    max_period: int
    h_y: float
    induced_bound_estimate: float  # H(Y) - estimate, labeled an estimate
    label: str = "estimate"


def conditional_entropy_sup(
    shift: SftPresentation, max_period: int, tol: float = 1e-9
) -> ConditionalEntropyReport:
    """Maximum of the conditional entropy over periodic x of period <= max_period."""
    if max_period < 1:
        raise InputError(f"max_period must be >= 1, got {max_period}")
    a_symbols = sorted({split_tokens(tok)[0] for tok in shift.alphabet})
    best = float("-inf")
    for p in range(1, max_period + 1):
        for cycle in itertools.product(a_symbols, repeat=p):
            try:
                value = conditional_entropy(shift, PeriodicWord(p, cycle), tol)
            except InputError:
                continue
            best = max(best, value)
    if best == float("-inf"):
        raise InputError("no admissible periodic x up to the given period")
    b_alphabet = Alphabet.of(sorted({split_tokens(tok)[1] for tok in shift.alphabet}))
    h_y = float(entropy(project_tracks(as_sofic(shift), [1], b_alphabet), tol))
    return ConditionalEntropyReport(
        sup_estimate=best,
        max_period=max_period,
        h_y=h_y,
        induced_bound_estimate=h_y - best,
    )


# ---------------------------------------------------------------------------
# Fooling certificates and common factors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FoolingCertificate:
    h_fooling: float
    h_cross: float
    certified: bool
    bound_bits: float | None  # claimed lower bound on N(S), only when certified


def fooling_certificate(
    shift: Presentation, fooling: Presentation, tol: float = 1e-9,
    guard: int = DEFAULT_STATE_GUARD,
) -> FoolingCertificate:
    """Entropy-based fooling certificate.

    Builds the cross shift of quadruples (x, y, x', y') with both pairs in
    F and both mixed pairs in S.  When its entropy does not exceed H(F),
    witnesses are essentially unique in the product sense and H(F) is
    reported as a certified lower bound; the check is a heuristic
    certificate, not a decision procedure for the countability condition.
    """
    gf, gs = as_sofic(fooling), as_sofic(shift)
    if gf.is_empty:
        raise InputError("fooling shift is empty")
    witness = language_contains(gs, gf, guard=guard)
    if witness is not None:
        raise InputError(f"fooling shift is not contained in S, witness {witness}")

    def split_edges(g: SoficPresentation):
        return [(s, split_tokens(lab), t) for s, lab, t in g.edges]

    f_edges = split_edges(gf)
    s_by_pair: dict[tuple[str, str], list] = {}
    for s, (a_part, b_part), t in split_edges(gs):
        s_by_pair.setdefault((a_part, b_part), []).append((s, t))
    edges = set()
    for s1, (a1, b1), t1 in f_edges:
        for s2, (a2, b2), t2 in f_edges:
            for sm1, tm1 in s_by_pair.get((a1, b2), ()):
                for sm2, tm2 in s_by_pair.get((a2, b1), ()):
                    edges.add(
                        (
                            (s1, s2, sm1, sm2),
                            join_tokens((a1, b1, a2, b2)),
                            (t1, t2, tm1, tm2),
                        )
                    )
                    if len(edges) > guard:
                        raise GuardExceeded(f"cross shift exceeded {guard} edges", limit=guard)
    parts = [sorted({split_tokens(tok)[i] for tok in gf.alphabet}) for i in (0, 1)]
    cross_alphabet = product_alphabet(
        Alphabet.of(parts[0]), Alphabet.of(parts[1]), Alphabet.of(parts[0]), Alphabet.of(parts[1])
    )
    cross = make_sofic(cross_alphabet, edges)
    h_f = float(entropy(gf, tol))
    h_c = float(entropy(cross, tol))
    certified = h_c <= h_f + 2 * tol
    return FoolingCertificate(h_f, h_c, certified, h_f if certified else None)


@dataclass(frozen=True)
class CommonFactorResult:
    accepted: bool
    bound_bits: float | None
    witness: Word | None  # admissible window where the two codes disagree


def common_factor_bound(
    shift: Presentation,
    phi: BlockCode,
    psi: BlockCode,
    factor: Presentation,
    tol: float = 1e-9,
    guard: int = DEFAULT_STATE_GUARD,
) -> CommonFactorResult:
    """Certified lower bound N(S) >= H(F) from a common factor of both marginals.

    Checks that phi maps the x projection onto F, psi maps the y projection
    onto F, and that the two compositions agree on every admissible window
    of S (an exact finite check since the codes are local).
    """
    gs = as_sofic(shift)
    a_alphabet = Alphabet.of(sorted({split_tokens(tok)[0] for tok in gs.alphabet}))
    b_alphabet = Alphabet.of(sorted({split_tokens(tok)[1] for tok in gs.alphabet}))
    x_proj = project_tracks(gs, [0], a_alphabet)
    y_proj = project_tracks(gs, [1], b_alphabet)
    image_x = apply_block_code(phi, x_proj, guard=guard)
    image_y = apply_block_code(psi, y_proj, guard=guard)
    from .shifts import sofic_equal

    if not sofic_equal(image_x, factor, guard=guard):
        raise InputError("phi does not map the x projection onto the factor shift")
    if not sofic_equal(image_y, factor, guard=guard):
        raise InputError("psi does not map the y projection onto the factor shift")

    radius = max(phi.radius, psi.radius)
    width = 2 * radius + 1
    for window in sorted(sofic_factors(gs, width, guard=guard)):
        a_track = tuple(split_tokens(tok)[0] for tok in window)
        b_track = tuple(split_tokens(tok)[1] for tok in window)
        lo, hi = radius - phi.radius, radius + phi.radius + 1
        out_phi = phi.apply_to_word(a_track[lo:hi])
        lo, hi = radius - psi.radius, radius + psi.radius + 1
        out_psi = psi.apply_to_word(b_track[lo:hi])
        if out_phi != out_psi:
            return CommonFactorResult(False, None, window)
    return CommonFactorResult(True, float(entropy(factor, tol)), None)
