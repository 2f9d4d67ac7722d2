"""Small exact LP solver for covering programs, in rational arithmetic.

Solves min 1'w  s.t.  A'w >= 1, w >= 0 by running primal simplex with
Bland's rule on the dual packing program max 1'y s.t. A y <= 1, y >= 0
(feasible at y = 0, so no phase one is needed).  All pivots use
``fractions.Fraction``, and the returned primal/dual pair is checked for
feasibility and equal objective value, so optimality is certified by
strong duality rather than trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class CoverLpSolution:
    value: Fraction
    weights: tuple[Fraction, ...]  # primal: one weight per covering set
    packing: tuple[Fraction, ...]  # dual: one mass per covered element


def solve_cover_lp_exact(incidence: list[list[int]], n_elements: int) -> CoverLpSolution:
    """Exact optimum of the fractional set-cover LP.

    ``incidence[r]`` lists the elements covered by set ``r``.  Every
    element must be covered by at least one set, otherwise the LP is
    infeasible and this raises ``ValueError``.
    """
    n_sets = len(incidence)
    covered = set()
    for elems in incidence:
        covered.update(elems)
    if covered != set(range(n_elements)):
        missing = sorted(set(range(n_elements)) - covered)
        raise ValueError(f"elements {missing} are not covered by any set")

    # Dual tableau: rows = sets (constraints sum_{e in set} y_e <= 1),
    # columns = y variables then slacks, then rhs.
    m, n = n_sets, n_elements
    zero, one = Fraction(0), Fraction(1)
    tableau = [[zero] * (n + m + 1) for _ in range(m)]
    for r, elems in enumerate(incidence):
        for e in elems:
            tableau[r][e] = one
        tableau[r][n + r] = one
        tableau[r][n + m] = one
    cost = [one] * n + [zero] * m + [zero]  # reduced costs, maximization
    basis = [n + r for r in range(m)]

    while True:
        enter = next((j for j in range(n + m) if cost[j] > 0), None)
        if enter is None:
            break
        ratio, leave = None, None
        for i in range(m):
            coef = tableau[i][enter]
            if coef > 0:
                r = tableau[i][n + m] / coef
                if ratio is None or r < ratio or (r == ratio and basis[i] < basis[leave]):
                    ratio, leave = r, i
        if leave is None:
            raise ValueError("unbounded packing LP (element with no covering set?)")
        pivot = tableau[leave][enter]
        tableau[leave] = [v / pivot for v in tableau[leave]]
        for i in range(m):
            if i != leave and tableau[i][enter] != 0:
                f = tableau[i][enter]
                tableau[i] = [a - f * b for a, b in zip(tableau[i], tableau[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [a - f * b for a, b in zip(cost, tableau[leave])]
        basis[leave] = enter

    packing = [zero] * n
    for i, b in enumerate(basis):
        if b < n:
            packing[b] = tableau[i][n + m]
    weights = [-cost[n + r] for r in range(m)]
    value = sum(packing, zero)

    # strong-duality certificate
    member = [set(elems) for elems in incidence]
    assert all(w >= 0 for w in weights) and all(y >= 0 for y in packing)
    for e in range(n):
        assert sum(weights[r] for r in range(m) if e in member[r]) >= 1
    for r in range(m):
        assert sum(packing[e] for e in incidence[r]) <= 1
    assert sum(weights, zero) == value
    return CoverLpSolution(value=value, weights=tuple(weights), packing=tuple(packing))
