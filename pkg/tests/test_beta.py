import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftcc.errors import InputError
from shiftcc.shifts import (
    Alphabet,
    beta_root,
    beta_shift,
    build_sft,
    entropy,
    full_shift,
    parry_admissible,
    sofic_equal,
)


def greedy_expansion(beta: float, max_len: int = 12) -> list[int]:
    """Oracle: greedy digit expansion of 1 in base beta, truncated.

    The floor tolerance absorbs the bisection error of the root, which
    matters exactly when the expansion terminates (the remainder hits an
    integer).
    """
    digits = []
    remainder = 1.0
    for _ in range(max_len):
        scaled = beta * remainder
        d = int(math.floor(scaled + 1e-9))
        digits.append(d)
        remainder = scaled - d
        if abs(remainder) < 1e-9:
            break
    while digits and digits[-1] == 0:
        digits.pop()
    return digits


class TestParryAdmissibility:
    def test_known_cases(self):
        assert parry_admissible([2])
        assert parry_admissible([1, 1])
        assert parry_admissible([1, 0, 1])
        assert parry_admissible([2, 1])
        assert not parry_admissible([1, 2])  # shifted tail exceeds the head
        assert not parry_admissible([1, 0])  # must end in a nonzero digit
        assert not parry_admissible([0, 1])
        assert not parry_admissible([])

    def test_brute_force_all_length_three(self):
        # oracle: direct comparison of every shift of the zero-padded string
        for d in itertools.product(range(4), repeat=3):
            d = list(d)
            padded = d + [0] * len(d)
            expected = (
                d[0] >= 1
                and d[-1] >= 1
                and all(padded[k : k + len(d)] < d for k in range(1, len(d)))
            )
            assert parry_admissible(d) == expected, d

    def test_accepted_expansions_are_greedy_fixed_points(self):
        # oracle: recompute the expansion from the root and compare
        for d in itertools.product(range(4), repeat=3):
            d = list(d)
            if not parry_admissible(d) or sum(d) == 1:
                continue
            root = beta_root(d)
            assert greedy_expansion(root) == d, (d, root)


class TestBetaRoot:
    def test_integer_base(self):
        assert beta_root([2]) == pytest.approx(2.0, abs=1e-10)
        assert beta_root([3]) == pytest.approx(3.0, abs=1e-10)

    def test_golden_ratio(self):
        assert beta_root([1, 1]) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-10)

    def test_silver_ratio(self):
        assert beta_root([2, 1]) == pytest.approx(1 + math.sqrt(2), abs=1e-10)

    def test_degenerate_expansion_of_one(self):
        assert beta_root([1]) == 1.0

    def test_inadmissible_rejected(self):
        with pytest.raises(InputError):
            beta_root([1, 2])


class TestBetaShift:
    def test_base_two_is_full_binary_shift(self):
        # digit 2 never occurs, so over the shared 3-symbol alphabet the
        # language is the full shift on {0, 1}
        shift = beta_shift([2])
        target = build_sft(Alphabet.of(["0", "1", "2"]), [("2",)])
        assert sofic_equal(shift, target)
        assert float(entropy(shift, 1e-9)) == pytest.approx(1.0, abs=1e-8)

    def test_golden_expansion_is_golden_mean_shift(self):
        shift = beta_shift([1, 1])
        target = build_sft(Alphabet.of(["0", "1"]), [("1", "1")])
        assert sofic_equal(shift, target)

    def test_entropy_matches_root_on_small_expansions(self):
        # every admissible expansion of length <= 4 with digits <= 3
        for length in range(1, 5):
            for d in itertools.product(range(4), repeat=length):
                d = list(d)
                if not parry_admissible(d):
                    continue
                value = float(entropy(beta_shift(d), 1e-8))
                assert value == pytest.approx(math.log2(beta_root(d)), abs=1e-6), d

    @given(st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_admissible_iff_shift_buildable(self, digits):
        if parry_admissible(digits):
            beta_shift(digits)
        else:
            with pytest.raises(InputError):
                beta_shift(digits)
