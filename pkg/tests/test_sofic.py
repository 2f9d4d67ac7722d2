import itertools

import pytest

from conftest import random_sft
from shiftcc.errors import InputError
from shiftcc.shifts import (
    Alphabet,
    build_sft,
    find_separating_word,
    full_shift,
    language_contains,
    make_sofic,
    sofic_count_words,
    sofic_equal,
    sofic_factors,
    sofic_from_sft,
    sofic_intersection,
    sofic_word_in_language,
    with_window,
)

A2 = Alphabet.of(["0", "1"])


def golden():
    return build_sft(A2, [("1", "1")])


def even_shift_a():
    """Two states: 1s come in blocks of even length."""
    return make_sofic(A2, {("A", "0", "A"), ("A", "1", "B"), ("B", "1", "A")})


def even_shift_b():
    """A different presentation of the same language."""
    return make_sofic(
        A2,
        {
            (1, "0", 1),
            (1, "1", 2),
            (2, "1", 3),
            (3, "0", 1),
            (3, "1", 2),
        },
    )


def even_word_ok(word):
    """Oracle: interior maximal runs of 1s must have even length."""
    word = "".join(word)
    runs = word.split("0")
    interior = runs[1:-1] if len(runs) >= 2 else []
    return all(len(r) % 2 == 0 for r in interior)


class TestSoficEqual:
    def test_golden_vs_itself_through_sofic(self):
        assert sofic_equal(golden(), sofic_from_sft(golden()))

    def test_golden_vs_full(self):
        assert not sofic_equal(golden(), full_shift(A2))
        witness = find_separating_word(golden(), full_shift(A2))
        assert witness == ("1", "1")

    def test_two_even_shift_presentations(self):
        a, b = even_shift_a(), even_shift_b()
        # oracle: compare factor sets up to length 10 with the run predicate
        for n in range(1, 11):
            words = {w for w in itertools.product("01", repeat=n) if even_word_ok(w)}
            assert sofic_factors(a, n) == words
            assert sofic_factors(b, n) == words
        assert sofic_equal(a, b)

    def test_even_vs_golden(self):
        assert not sofic_equal(even_shift_a(), golden())

    def test_reflexive_on_random_sfts(self, rng):
        for _ in range(50):
            _, _, s = random_sft(rng)
            assert sofic_equal(s, with_window(s, s.window + 1))

    def test_symmetric_on_random_pairs(self, rng):
        shifts = [random_sft(rng)[2] for _ in range(12)]
        shifts = [s for s in shifts if len(s.alphabet) == 2]
        for a, b in itertools.combinations(shifts, 2):
            assert sofic_equal(a, b) == sofic_equal(b, a)

    def test_alphabet_mismatch(self):
        with pytest.raises(InputError):
            sofic_equal(golden(), full_shift(Alphabet.of(["a", "b"])))

    def test_empty_equal_empty(self):
        e1 = build_sft(A2, [("0",), ("1",)])
        e2 = build_sft(A2, [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")])
        assert sofic_equal(e1, e2)


class TestLanguageOps:
    def test_membership(self):
        even = even_shift_a()
        assert sofic_word_in_language(even, tuple("0110"))
        assert not sofic_word_in_language(even, tuple("010"))

    def test_containment(self):
        assert language_contains(full_shift(A2), golden()) is None
        witness = language_contains(golden(), full_shift(A2))
        assert witness is not None and not sofic_word_in_language(sofic_from_sft(golden()), witness)

    def test_intersection_collapses_to_fixed_point(self):
        # points must avoid 11 and have even interior 1-runs, leaving only 0^inf;
        # the factor language of the intersection shift is strictly smaller than
        # the intersection of the factor languages (which still contains "1")
        inter = sofic_intersection(golden(), even_shift_a())
        for n in range(1, 8):
            assert sofic_factors(inter, n) == {("0",) * n}

    def test_intersection_with_full_shift(self):
        inter = sofic_intersection(full_shift(A2), even_shift_a())
        assert sofic_equal(inter, even_shift_a())

    def test_count_words(self):
        even = even_shift_a()
        for n in range(8):
            expected = sum(1 for w in itertools.product("01", repeat=n) if even_word_ok(w))
            assert sofic_count_words(even, n) == expected
