"""Shift spaces of non-integer bases with finite digit expansions of 1.

A digit string d_1..d_p (d_1 >= 1, d_p >= 1) that is strictly
lexicographically larger than all of its shifts (zero-padded) is the
greedy expansion of 1 in base beta, where beta > 1 is the real root of
x^p = d_1 x^(p-1) + ... + d_p.  The associated shift consists of the
digit sequences dominated at every position by the quasi-greedy
expansion (d_1 .. d_{p-1} (d_p - 1)) repeated; it is of finite type with
forbidden words of length at most p, and its entropy is log2(beta).
"""

from __future__ import annotations

from typing import Sequence

from ..errors import InputError
from .alphabet import Alphabet
from .sft import SftPresentation, build_sft


def parry_admissible(expansion: Sequence[int]) -> bool:
    """Test the lexicographic self-domination condition for digit strings."""
    d = list(expansion)
    p = len(d)
    if p == 0 or any(not isinstance(x, int) or x < 0 for x in d):
        return False
    if d[0] < 1 or d[-1] < 1:
        return False
    padded = d + [0] * p
    for k in range(1, p):
        if padded[k : k + p] >= d:
            return False
    return True


def beta_root(expansion: Sequence[int], tol: float = 1e-12) -> float:
    """Real root beta >= 1 of x^p = d_1 x^(p-1) + ... + d_p, by bisection."""
    d = _validated(expansion)
    p = len(d)

    def f(x: float) -> float:
        return x**p - sum(digit * x ** (p - i - 1) for i, digit in enumerate(d))

    if sum(d) == 1:  # expansion [1]: root exactly 1
        return 1.0
    lo, hi = 1.0, 2.0 + max(d)  # Cauchy bound: all roots below 1 + max digit
    assert f(lo) < 0 and f(hi) > 0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def beta_shift(expansion: Sequence[int]) -> SftPresentation:
    """The finite-type shift of digit sequences for the given expansion of 1."""
    d = _validated(expansion)
    alphabet = Alphabet(tuple(str(i) for i in range(d[0] + 1)))
    quasi = d[:-1] + [d[-1] - 1]
    forbidden = []
    for j in range(len(d)):
        prefix = tuple(str(x) for x in quasi[:j])
        for c in range(quasi[j] + 1, d[0] + 1):
            forbidden.append(prefix + (str(c),))
    return build_sft(alphabet, forbidden)


def _validated(expansion: Sequence[int]) -> list[int]:
    d = list(expansion)
    if not d:
        raise InputError("expansion must be nonempty")
    if any(not isinstance(x, int) or x < 0 for x in d):
        raise InputError(f"expansion digits must be nonnegative integers: {d}")
    if not parry_admissible(d):
        raise InputError(
            f"{d} is not an admissible expansion of 1 "
            "(requires d_1 >= 1, d_p >= 1, and strict domination of all shifts)"
        )
    return d
