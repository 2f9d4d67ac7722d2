"""Nondeterministic communication complexity of finite boolean relations.

A nondeterministic protocol with message set Z is the same thing as a
cover of the relation's 1-entries by monochromatic combinatorial
rectangles, one per message, so the complexity in bits is log2 of the
minimum cover size.  This module computes exact and greedy covers over
the inclusion-maximal rectangles, the fractional LP relaxation that
governs amortized complexity over tensor powers, fooling-set lower
bounds, and the explicit index protocol for inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._lp import solve_cover_lp_exact
from .errors import GuardExceeded, InputError
from .shifts.alphabet import join_tokens

DEFAULT_BUDGET = 100_000
DEFAULT_CELL_GUARD = 4_000_000
_EXACT_LP_LIMIT = 4096  # sets x elements product cap for rational simplex


# ---------------------------------------------------------------------------
# Relations and rectangles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationMatrix:
    """Boolean relation R over finite index sets, with optional labels."""

    bits: np.ndarray
    x_labels: tuple[str, ...]
    y_labels: tuple[str, ...]

    def __post_init__(self):
        if self.bits.ndim != 2 or self.bits.dtype != np.bool_:
            raise InputError("relation matrix must be a 2-d boolean array")
        if self.bits.shape != (len(self.x_labels), len(self.y_labels)):
            raise InputError("label counts must match matrix dimensions")
        self.bits.setflags(write=False)

    @property
    def x_size(self) -> int:
        return self.bits.shape[0]

    @property
    def y_size(self) -> int:
        return self.bits.shape[1]

    @property
    def ones(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in np.argwhere(self.bits)]

    @property
    def is_empty(self) -> bool:
        return not self.bits.any()

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]], x_labels=None, y_labels=None) -> "RelationMatrix":
        bits = np.array(rows, dtype=bool)
        if bits.ndim != 2:
            raise InputError("relation needs a rectangular matrix")
        x_labels = tuple(x_labels) if x_labels else tuple(str(i) for i in range(bits.shape[0]))
        y_labels = tuple(y_labels) if y_labels else tuple(str(j) for j in range(bits.shape[1]))
        return cls(bits, x_labels, y_labels)

    @classmethod
    def from_ones(cls, x_size: int, y_size: int, ones: Iterable[tuple[int, int]],
                  x_labels=None, y_labels=None) -> "RelationMatrix":
        bits = np.zeros((x_size, y_size), dtype=bool)
        for i, j in ones:
            if not (0 <= i < x_size and 0 <= j < y_size):
                raise InputError(f"one-entry ({i},{j}) out of range {x_size}x{y_size}")
            bits[i, j] = True
        x_labels = tuple(x_labels) if x_labels else tuple(str(i) for i in range(x_size))
        y_labels = tuple(y_labels) if y_labels else tuple(str(j) for j in range(y_size))
        return cls(bits, x_labels, y_labels)

    def restrict(self, rows: Sequence[int], cols: Sequence[int]) -> "RelationMatrix":
        rows, cols = list(rows), list(cols)
        return RelationMatrix(
            self.bits[np.ix_(rows, cols)].copy(),
            tuple(self.x_labels[i] for i in rows),
            tuple(self.y_labels[j] for j in cols),
        )


def _bitstrings(k: int) -> tuple[str, ...]:
    return tuple(format(v, f"0{k}b") for v in range(1 << k))


def eq_relation(k: int) -> RelationMatrix:
    """Equality of k-bit strings: the 2^k identity matrix."""
    n = 1 << k
    return RelationMatrix(np.eye(n, dtype=bool), _bitstrings(k), _bitstrings(k))


def neq_relation(k: int) -> RelationMatrix:
    """Inequality of k-bit strings: complement of the identity."""
    n = 1 << k
    return RelationMatrix(~np.eye(n, dtype=bool), _bitstrings(k), _bitstrings(k))


def all_ones_relation(x_size: int, y_size: int) -> RelationMatrix:
    return RelationMatrix.from_matrix(np.ones((x_size, y_size), dtype=bool))


@dataclass(frozen=True)
class Rectangle:
    rows: frozenset[int]
    cols: frozenset[int]

    def __post_init__(self):
        if not self.rows or not self.cols:
            raise InputError("rectangle sides must be nonempty")

    def sort_key(self):
        return (sorted(self.rows), sorted(self.cols))


@dataclass(frozen=True)
class CoverResult:
    rectangles: tuple[Rectangle, ...]
    cover_number: int
    nd_cc_bits: float
    exact: bool

    def __post_init__(self):
        if self.cover_number != len(self.rectangles):
            raise InputError("cover_number must equal the rectangle count")


def verify_cover(relation: RelationMatrix, rectangles: Sequence[Rectangle]) -> None:
    """Check that rectangles are monochromatic-1 and cover R exactly."""
    covered = np.zeros_like(relation.bits)
    for rect in rectangles:
        rows, cols = sorted(rect.rows), sorted(rect.cols)
        block = relation.bits[np.ix_(rows, cols)]
        if not block.all():
            bad = np.argwhere(~block)[0]
            raise InputError(
                f"rectangle contains 0-entry at ({rows[bad[0]]},{cols[bad[1]]})"
            )
        covered[np.ix_(rows, cols)] = True
    if not np.array_equal(covered, relation.bits):
        missing = np.argwhere(relation.bits & ~covered)
        raise InputError(f"cover misses 1-entries, e.g. {tuple(missing[0])}")


def _make_cover(relation: RelationMatrix, rectangles: Sequence[Rectangle], exact: bool) -> CoverResult:
    rects = tuple(sorted(rectangles, key=Rectangle.sort_key))
    verify_cover(relation, rects)
    return CoverResult(rects, len(rects), math.log2(len(rects)), exact)


# ---------------------------------------------------------------------------
# Maximal rectangles (Galois-closure enumeration)
# ---------------------------------------------------------------------------


def maximal_rectangles(relation: RelationMatrix) -> list[Rectangle]:
    """All inclusion-maximal monochromatic-1 rectangles.

    Maximal rectangles are exactly the pairs (rows(C), C) with C a closed
    column set under the row/column Galois connection, so a breadth-first
    closure walk that adds one row at a time enumerates them all.
    """
    if relation.is_empty:
        raise InputError("empty relation has no rectangles")
    n_rows, n_cols = relation.bits.shape
    row_support = [
        sum(1 << j for j in range(n_cols) if relation.bits[i, j]) for i in range(n_rows)
    ]

    def rows_of(cmask: int) -> frozenset[int]:
        return frozenset(i for i in range(n_rows) if row_support[i] & cmask == cmask)

    seen: set[tuple[frozenset[int], int]] = set()
    stack: list[tuple[frozenset[int], int]] = []
    for i in range(n_rows):
        cmask = row_support[i]
        if not cmask:
            continue
        rows = rows_of(cmask)
        closed = cmask
        for r in rows:
            closed &= row_support[r]
        key = (rows, closed)
        if key not in seen:
            seen.add(key)
            stack.append(key)
    out: list[Rectangle] = []
    while stack:
        rows, cmask = stack.pop()
        out.append(
            Rectangle(rows, frozenset(j for j in range(n_cols) if (cmask >> j) & 1))
        )
        for i in range(n_rows):
            if i in rows:
                continue
            cmask2 = cmask & row_support[i]
            if not cmask2:
                continue
            rows2 = rows_of(cmask2)
            key = (rows2, cmask2)
            if key not in seen:
                seen.add(key)
                stack.append(key)
    out.sort(key=Rectangle.sort_key)
    return out


# ---------------------------------------------------------------------------
# Cover solvers
# ---------------------------------------------------------------------------


def _element_masks(relation: RelationMatrix, rects: Sequence[Rectangle]):
    """Index the 1-entries in (row, col) order and mask each rectangle."""
    ones = relation.ones
    index = {e: t for t, e in enumerate(ones)}
    masks = []
    for rect in rects:
        m = 0
        for i in rect.rows:
            for j in rect.cols:
                m |= 1 << index[(i, j)]
        masks.append(m)
    return ones, masks


def _greedy_cover_masks(masks: Sequence[int], universe: int) -> list[int]:
    chosen: list[int] = []
    uncovered = universe
    while uncovered:
        best = max(range(len(masks)), key=lambda t: ((masks[t] & uncovered).bit_count(), -t))
        if not masks[best] & uncovered:
            raise InputError("cover misses 1-entries")  # unreachable for maximal rects
        chosen.append(best)
        uncovered &= ~masks[best]
    return chosen


def greedy_fooling_bound(relation: RelationMatrix) -> int:
    """Size of a greedily built fooling set (a valid cover lower bound)."""
    bits = relation.bits
    kept: list[tuple[int, int]] = []
    for x, y in relation.ones:
        if all(not (bits[x, y2] and bits[x2, y]) for x2, y2 in kept):
            kept.append((x, y))
    return len(kept)


def _lp_lower_bound(masks: Sequence[int], n_elements: int):
    """Fractional cover of the residual universe; returns (value, dual masses)."""
    from scipy.optimize import linprog

    a_ub = np.zeros((n_elements, len(masks)))
    for t, m in enumerate(masks):
        for e in range(n_elements):
            if (m >> e) & 1:
                a_ub[e, t] = -1.0
    keep = a_ub.any(axis=1)
    res = linprog(
        c=np.ones(len(masks)), A_ub=a_ub[keep], b_ub=-np.ones(int(keep.sum())),
        bounds=(0, None), method="highs",
    )
    if not res.success:
        raise RuntimeError(f"covering LP failed: {res.message}")
    dual = np.zeros(n_elements)
    dual[keep] = -res.ineqlin.marginals
    return float(res.fun), list(dual)


def cover_number_exact(
    relation: RelationMatrix,
    budget: int = DEFAULT_BUDGET,
    milp_fallback: bool = True,
) -> CoverResult:
    """Minimum number of monochromatic-1 rectangles covering the relation.

    Branch and bound over the maximal rectangles: branch on the uncovered
    1-entry contained in the fewest rectangles (ties by (row, col)), prune
    with fooling-set and fractional-cover bounds plus branch dominance.
    If the search has not closed within ``budget`` nodes, a MILP over the
    same rectangle model finishes it (set ``milp_fallback=False`` to get
    the best incumbent with ``exact=False`` instead).
    """
    if relation.is_empty:
        raise InputError("communication complexity of the empty relation is undefined")
    if budget <= 0:
        raise InputError(f"budget must be positive, got {budget}")
    rects = maximal_rectangles(relation)
    ones, masks = _element_masks(relation, rects)
    universe = (1 << len(ones)) - 1

    # forced rectangles: a 1-entry covered by exactly one maximal rectangle
    forced: list[int] = []
    uncovered = universe
    w = uncovered
    while w:
        lsb = w & -w
        e = lsb.bit_length() - 1
        w ^= lsb
        owners = [t for t, m in enumerate(masks) if (m >> e) & 1]
        if len(owners) == 1 and owners[0] not in forced:
            forced.append(owners[0])
            uncovered &= ~masks[owners[0]]

    if not uncovered:
        return _make_cover(relation, [rects[t] for t in forced], exact=True)

    live = [t for t in range(len(masks)) if masks[t] & uncovered]
    elem_rects: dict[int, list[int]] = {}
    w = uncovered
    while w:
        lsb = w & -w
        e = lsb.bit_length() - 1
        w ^= lsb
        elem_rects[e] = [t for t in live if (masks[t] >> e) & 1]

    incumbent = forced + _greedy_cover_masks(masks, uncovered)
    lp_value, dual = _lp_lower_bound([masks[t] & uncovered for t in live], len(ones))
    lower = len(forced) + max(
        _residual_fooling_bound(relation, ones, uncovered),
        math.ceil(lp_value - 1e-9),
    )
    if len(incumbent) <= lower:
        return _make_cover(relation, [rects[t] for t in incumbent], exact=True)

    best = list(incumbent)
    nodes = 0
    exhausted = False
    failed: dict[int, int] = {}

    def dual_mass(unc: int) -> float:
        s = 0.0
        w = unc
        while w:
            lsb = w & -w
            s += dual[lsb.bit_length() - 1]
            w ^= lsb
        return s

    def search(unc: int, chosen: list[int]) -> None:
        nonlocal nodes, exhausted, best
        if exhausted:
            return
        nodes += 1
        if nodes > budget:
            exhausted = True
            return
        if not unc:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        bound = len(chosen) + max(1, math.ceil(dual_mass(unc) - 1e-9))
        if bound >= len(best):
            return
        if failed.get(unc, -1) >= len(best) - len(chosen):
            return
        branch_e = min(
            (e for e in elem_rects if (unc >> e) & 1),
            key=lambda e: (sum(1 for t in elem_rects[e] if masks[t] & unc), e),
        )
        candidates = sorted(
            (t for t in elem_rects[branch_e] if masks[t] & unc),
            key=lambda t: (-(masks[t] & unc).bit_count(), t),
        )
        tried: list[int] = []
        for t in candidates:
            gain = masks[t] & unc
            if any(gain & ~p == 0 for p in tried):
                continue  # dominated by an earlier sibling
            tried.append(gain)
            chosen.append(t)
            search(unc & ~masks[t], chosen)
            chosen.pop()
            if exhausted:
                return
        failed[unc] = max(failed.get(unc, -1), len(best) - len(chosen))

    search(uncovered, list(forced))

    if not exhausted:
        return _make_cover(relation, [rects[t] for t in best], exact=True)
    if not milp_fallback:
        return _make_cover(relation, [rects[t] for t in best], exact=False)

    chosen = _milp_cover([masks[t] for t in live], uncovered, len(ones))
    solution = forced + [live[t] for t in chosen]
    if len(solution) > len(best):
        solution = best  # incumbent was already at least as good
    assert len(solution) >= lower
    return _make_cover(relation, [rects[t] for t in solution], exact=True)


def _residual_fooling_bound(relation: RelationMatrix, ones, uncovered: int) -> int:
    bits = relation.bits
    kept: list[tuple[int, int]] = []
    for e, (x, y) in enumerate(ones):
        if not (uncovered >> e) & 1:
            continue
        if all(not (bits[x, y2] and bits[x2, y]) for x2, y2 in kept):
            kept.append((x, y))
    return len(kept)


def _milp_cover(masks: Sequence[int], universe: int, n_elements: int) -> list[int]:
    """Finish the exact search with a MILP over the same rectangle model."""
    from scipy.optimize import LinearConstraint, milp

    elems = [e for e in range(n_elements) if (universe >> e) & 1]
    a = np.zeros((len(elems), len(masks)))
    for t, m in enumerate(masks):
        for row, e in enumerate(elems):
            if (m >> e) & 1:
                a[row, t] = 1.0
    res = milp(
        c=np.ones(len(masks)),
        constraints=LinearConstraint(a, lb=np.ones(len(elems)), ub=np.inf),
        integrality=np.ones(len(masks)),
        bounds=None,
    )
    if res.status != 0:
        raise RuntimeError(f"exact cover search failed: {res.message}")
    return [t for t in range(len(masks)) if res.x[t] > 0.5]


def cover_number_greedy(relation: RelationMatrix) -> CoverResult:
    """Greedy cover over maximal rectangles (within 1 + ln(#ones) of optimal)."""
    if relation.is_empty:
        raise InputError("communication complexity of the empty relation is undefined")
    rects = maximal_rectangles(relation)
    ones, masks = _element_masks(relation, rects)
    chosen = _greedy_cover_masks(masks, (1 << len(ones)) - 1)
    return _make_cover(relation, [rects[t] for t in chosen], exact=False)


# ---------------------------------------------------------------------------
# Fractional cover
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FractionalCover:
    value: float
    bits: float
    weights: tuple[float, ...]
    rectangles: tuple[Rectangle, ...]
    exact: bool  # solved in rational arithmetic (else certified within eps)


def fractional_cover(relation: RelationMatrix, eps: float = 1e-3) -> FractionalCover:
    """Optimal fractional rectangle cover C*(R) and its log2.

    Desk-scale instances are solved exactly in rational arithmetic with a
    strong-duality certificate; larger ones fall back to a floating-point
    LP whose primal/dual gap is checked against ``eps``.
    """
    if eps <= 0:
        raise InputError(f"eps must be positive, got {eps}")
    if relation.is_empty:
        raise InputError("fractional cover of the empty relation is undefined")
    rects = maximal_rectangles(relation)
    ones, masks = _element_masks(relation, rects)
    incidence = [[e for e in range(len(ones)) if (m >> e) & 1] for m in masks]
    if len(rects) * len(ones) <= _EXACT_LP_LIMIT * 64:
        sol = solve_cover_lp_exact(incidence, len(ones))
        return FractionalCover(
            value=float(sol.value),
            bits=math.log2(float(sol.value)),
            weights=tuple(float(w) for w in sol.weights),
            rectangles=tuple(rects),
            exact=True,
        )
    from scipy.optimize import linprog

    a_ub = np.zeros((len(ones), len(rects)))
    for t, elems in enumerate(incidence):
        for e in elems:
            a_ub[e, t] = -1.0
    res = linprog(
        c=np.ones(len(rects)), A_ub=a_ub, b_ub=-np.ones(len(ones)),
        bounds=(0, None), method="highs",
    )
    if not res.success:
        raise RuntimeError(f"covering LP failed: {res.message}")
    weights = np.maximum(res.x, 0.0)
    coverage = -a_ub @ weights
    scale = coverage.min()
    if scale <= 0:
        raise RuntimeError("LP returned an infeasible cover")
    weights = weights / scale  # rescale to strict feasibility
    primal = float(weights.sum())
    dual = float(-res.ineqlin.marginals.sum())
    if dual > 0 and primal / dual > 1 + eps:
        raise RuntimeError(f"LP gap {primal / dual - 1:.2e} exceeds eps={eps}")
    return FractionalCover(
        value=primal,
        bits=math.log2(primal),
        weights=tuple(float(w) for w in weights),
        rectangles=tuple(rects),
        exact=False,
    )


# ---------------------------------------------------------------------------
# Tensor powers and amortized complexity
# ---------------------------------------------------------------------------


def tensor_power(relation: RelationMatrix, n: int, guard: int = DEFAULT_CELL_GUARD) -> RelationMatrix:
    """R^n: related iff every coordinate pair is related (Kronecker power)."""
    if n < 1:
        raise InputError(f"tensor power needs n >= 1, got {n}")
    cells = (relation.x_size**n) * (relation.y_size**n)
    if cells > guard:
        raise GuardExceeded(
            f"tensor power would have {relation.x_size ** n} x {relation.y_size ** n} "
            f"= {cells} cells (guard {guard})",
            requested=cells,
            limit=guard,
        )
    bits = relation.bits
    x_labels, y_labels = relation.x_labels, relation.y_labels
    for _ in range(n - 1):
        bits = np.kron(bits, relation.bits).astype(bool)
        x_labels = tuple(join_tokens((a, b)) for a in x_labels for b in relation.x_labels)
        y_labels = tuple(join_tokens((a, b)) for a in y_labels for b in relation.y_labels)
    return RelationMatrix(bits.copy(), x_labels, y_labels)


@dataclass(frozen=True)
class AmortizedRow:
    n: int
    upper_bits: float  # log2 C_upper(R^n) / n
    lower_bits: float  # log2 C_lower(R^n) / n
    upper_exact: bool


@dataclass(frozen=True)
class AmortizedReport:
    rows: tuple[AmortizedRow, ...]
    fekete_upper_bits: tuple[float, ...]  # running minimum of the upper column
    fractional_limit_bits: float  # log2 C*(R)


def amortized_sequence(
    relation: RelationMatrix,
    n_max: int,
    budget: int = DEFAULT_BUDGET,
    eps: float = 1e-3,
    guard: int = DEFAULT_CELL_GUARD,
) -> AmortizedReport:
    """Bracket log2 C(R^n)/n for n = 1..n_max around the fractional limit."""
    if relation.is_empty:
        raise InputError("amortized complexity of the empty relation is undefined")
    base_frac = fractional_cover(relation, eps)
    rows = []
    for n in range(1, n_max + 1):
        power = tensor_power(relation, n, guard=guard)
        result = cover_number_exact(power, budget=budget)
        if result.exact:
            upper = lower = result.cover_number
        else:
            upper = result.cover_number
            lower = max(
                greedy_fooling_bound(power),
                math.ceil(fractional_cover(power, eps).value - eps),
            )
        rows.append(
            AmortizedRow(
                n=n,
                upper_bits=math.log2(upper) / n,
                lower_bits=math.log2(max(1, lower)) / n,
                upper_exact=result.exact,
            )
        )
    fekete = []
    running = float("inf")
    for row in rows:
        running = min(running, row.upper_bits)
        fekete.append(running)
    return AmortizedReport(tuple(rows), tuple(fekete), base_frac.bits)


# ---------------------------------------------------------------------------
# Fooling sets and the inequality index protocol
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FoolingSetFinite:
    pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class FoolingCheckResult:
    accepted: bool
    bits: float | None
    violation: tuple[int, int, int, int] | None  # (x, y, x', y') witnessing failure


def fooling_check(relation: RelationMatrix, fooling: FoolingSetFinite) -> FoolingCheckResult:
    """Verify the pairwise fooling condition; accepted sets prove N(R) >= log2 |F|.

    Rejection names a violating quadruple: two pairs whose cross entries
    are both 1-entries, so some rectangle could contain both.
    """
    bits = relation.bits
    pairs = list(fooling.pairs)
    for x, y in pairs:
        if not (0 <= x < relation.x_size and 0 <= y < relation.y_size):
            raise InputError(f"fooling pair ({x},{y}) out of range")
        if not bits[x, y]:
            raise InputError(f"fooling pair ({x},{y}) is not a 1-entry of the relation")
    if len(set(pairs)) != len(pairs):
        raise InputError("fooling set has duplicate pairs")
    for a in range(len(pairs)):
        for b in range(a + 1, len(pairs)):
            x, y = pairs[a]
            x2, y2 = pairs[b]
            if bits[x, y2] and bits[x2, y]:
                return FoolingCheckResult(False, None, (x, y, x2, y2))
    return FoolingCheckResult(True, math.log2(len(pairs)), None)


def neq_index_protocol(k: int) -> CoverResult:
    """The send-an-index protocol for k-bit inequality: 2k rectangles.

    Message (i, a) is usable when Alice's i-th bit is a and Bob's is not,
    which costs log2(2k) = log2(k) + 1 bits.  The returned cover is
    verified against ``neq_relation(k)``.
    """
    if k < 1:
        raise InputError(f"need k >= 1, got {k}")
    relation = neq_relation(k)
    n = 1 << k
    rectangles = []
    for i in range(k):
        for a in (0, 1):
            rows = frozenset(x for x in range(n) if (x >> (k - 1 - i)) & 1 == a)
            cols = frozenset(y for y in range(n) if (y >> (k - 1 - i)) & 1 != a)
            rectangles.append(Rectangle(rows, cols))
    return _make_cover(relation, rectangles, exact=False)
