"""Entropy of presentations via certified spectral-radius bracketing.

The growth rate of a nonnegative integer matrix is computed per strongly
connected component.  On an irreducible component, power iteration of
``A + I`` (primitive, so the iteration converges) yields two-sided
Collatz-Wielandt bounds ``min_i (Ax)_i/x_i <= rho <= max_i (Ax)_i/x_i``;
iteration stops once the bracket is narrower than the requested
tolerance, so the result carries its own certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InputError

NEG_INFINITY = float("-inf")

_MAX_ITERATIONS = 2_000_000


@dataclass(frozen=True)
class EntropyValue:
    """Entropy in bits per symbol; ``-inf`` marks the empty shift."""

    bits_per_symbol: float

    @property
    def is_neg_infinity(self) -> bool:
        return self.bits_per_symbol == NEG_INFINITY

    @classmethod
    def empty(cls) -> "EntropyValue":
        return cls(NEG_INFINITY)

    def __float__(self) -> float:
        return self.bits_per_symbol


def _strongly_connected_components(n: int, succ: list[list[int]]) -> list[list[int]]:
    """Iterative Tarjan."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(succ[v]):
                w = succ[v][pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return components


def _component_radius(matrix: np.ndarray, tol_log2: float) -> float:
    """Spectral radius of an irreducible nonnegative matrix, within tol in log2."""
    n = matrix.shape[0]
    if n == 1:
        return float(matrix[0, 0])
    shifted = matrix + np.eye(n)
    x = np.ones(n)
    lo_best, hi_best = 1.0, float("inf")
    for _ in range(_MAX_ITERATIONS):
        y = shifted @ x
        ratios = y / x
        lo_best = max(lo_best, float(ratios.min()))
        hi_best = min(hi_best, float(ratios.max()))
        rho_lo, rho_hi = lo_best - 1.0, hi_best - 1.0
        if rho_lo > 0 and math.log2(rho_hi) - math.log2(rho_lo) < tol_log2:
            return math.sqrt(rho_lo * rho_hi)
        if rho_hi - rho_lo < 1e-15 * max(1.0, rho_hi):
            return (rho_lo + rho_hi) / 2.0
        x = y / y.sum()
    raise RuntimeError("spectral radius bracketing did not converge")


def log2_spectral_radius(n: int, succ_counts: dict[int, dict[int, int]], tol: float) -> float:
    """log2 of the spectral radius of a nonnegative integer adjacency structure.

    ``succ_counts[i][j]`` is the number of parallel edges i -> j.  Returns
    ``-inf`` when the graph has no cycle.
    """
    if tol <= 0:
        raise InputError(f"tolerance must be positive, got {tol}")
    matrix = np.zeros((n, n))
    for i, row in succ_counts.items():
        for j, c in row.items():
            matrix[i, j] = c
    return log2_spectral_radius_matrix(matrix, tol)


def log2_spectral_radius_matrix(matrix: np.ndarray, tol: float) -> float:
    """log2 spectral radius of a nonnegative matrix, ``-inf`` if nilpotent."""
    if tol <= 0:
        raise InputError(f"tolerance must be positive, got {tol}")
    n = matrix.shape[0]
    succ = [sorted(np.nonzero(matrix[i])[0].tolist()) for i in range(n)]
    best = NEG_INFINITY
    for comp in _strongly_connected_components(n, succ):
        idx = np.array(sorted(comp))
        sub = matrix[np.ix_(idx, idx)]
        if not sub.any():
            continue  # trivial component without a self-loop
        rho = _component_radius(sub, tol)
        if rho > 0:
            best = max(best, math.log2(rho))
    return best


def sft_entropy(shift, tol: float = 1e-9) -> EntropyValue:
    """Entropy of an SFT presentation: log2 spectral radius of its adjacency."""
    if tol <= 0:
        raise InputError(f"tolerance must be positive, got {tol}")
    if shift.is_empty:
        return EntropyValue.empty()
    verts = sorted(shift.vertices)
    index = {v: i for i, v in enumerate(verts)}
    succ_counts: dict[int, dict[int, int]] = {}
    for e in shift.edges:
        row = succ_counts.setdefault(index[e[:-1]], {})
        j = index[e[1:]]
        row[j] = row.get(j, 0) + 1
    bits = log2_spectral_radius(len(verts), succ_counts, tol)
    if bits == NEG_INFINITY:
        return EntropyValue.empty()
    return EntropyValue(max(0.0, bits))
