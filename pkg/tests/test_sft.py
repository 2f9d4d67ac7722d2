import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_count, brute_factors, random_sft
from shiftcc.errors import InputError
from shiftcc.shifts import (
    Alphabet,
    BlockCode,
    apply_block_code,
    build_sft,
    count_words,
    entropy,
    factors,
    full_shift,
    product_shift,
    sofic_equal,
    sofic_factors,
    with_window,
    word_in_shift,
)

A2 = Alphabet.of(["0", "1"])
GOLDEN_BITS = math.log2((1 + math.sqrt(5)) / 2)


def golden():
    return build_sft(A2, [("1", "1")])


class TestBuildSft:
    def test_full_shift_window_one(self):
        s = build_sft(A2, [])
        assert s.window == 1
        assert s.vertices == frozenset({()})
        assert s.edges == frozenset({("0",), ("1",)})

    def test_golden_mean_graph(self):
        s = golden()
        # oracle: enumerate allowed 2-words by hand
        assert s.vertices == frozenset({("0",), ("1",)})
        assert s.edges == frozenset({("0", "0"), ("0", "1"), ("1", "0")})

    def test_symbol_not_in_alphabet(self):
        with pytest.raises(InputError):
            build_sft(A2, [("2",)])

    def test_forbid_everything_gives_empty(self):
        s = build_sft(A2, [("0",), ("1",)])
        assert s.is_empty

    def test_trimming_drops_dead_ends(self):
        # after '1' only '1' may follow, but '11' is also forbidden: no point uses '1'
        s = build_sft(A2, [("1", "0"), ("1", "1")])
        assert word_in_shift(s, ("0", "0"))
        assert not word_in_shift(s, ("1",))


class TestCountWords:
    def test_full_shift_powers(self):
        s = full_shift(A2)
        assert [count_words(s, n) for n in range(5)] == [1, 2, 4, 8, 16]

    def test_golden_counts_vs_bruteforce(self):
        s = golden()
        for n in range(1, 7):
            assert count_words(s, n) == brute_count("01", [("1", "1")], n)

    def test_golden_small_values(self):
        s = golden()
        assert [count_words(s, n) for n in (1, 2, 3, 4)] == [2, 3, 5, 8]

    def test_empty_shift(self):
        s = build_sft(A2, [("0",), ("1",)])
        assert count_words(s, 1) == 0
        assert count_words(s, 0) == 0

    def test_factors_match_counts(self):
        s = build_sft(A2, [("0", "1", "1")])
        for n in range(1, 6):
            assert len(factors(s, n)) == count_words(s, n)
            assert factors(s, n) == brute_factors("01", [("0", "1", "1")], n)

    @given(st.lists(st.text(alphabet="01", min_size=1, max_size=3), max_size=3))
    @settings(max_examples=40, deadline=None)
    def test_submultiplicative(self, forbidden_strs):
        s = build_sft(A2, [tuple(w) for w in forbidden_strs])
        counts = {n: count_words(s, n) for n in range(1, 7)}
        for n in range(1, 4):
            for m in range(1, 4):
                assert counts[n + m] <= counts[n] * counts[m]


class TestEntropy:
    def test_full_shifts(self):
        for k in (2, 3, 4, 8):
            s = full_shift(Alphabet.of([str(i) for i in range(k)]))
            assert float(entropy(s, 1e-10)) == pytest.approx(math.log2(k), abs=1e-9)

    def test_golden_mean(self):
        value = float(entropy(golden(), 1e-8))
        assert value == pytest.approx(GOLDEN_BITS, abs=1e-6)

    def test_golden_vs_word_count_fit(self):
        # independent oracle: log2(c_n)/n approaches the entropy from above
        s = golden()
        value = float(entropy(s, 1e-9))
        upper = math.log2(count_words(s, 64)) / 64
        assert value <= upper + 1e-9
        assert upper - value < 0.01

    def test_empty_is_neg_infinity(self):
        s = build_sft(A2, [("0",), ("1",)])
        assert entropy(s).is_neg_infinity

    def test_monotone_in_forbidden_words(self):
        weaker = build_sft(A2, [("1", "1")])
        stronger = build_sft(A2, [("1", "1"), ("0", "0", "0")])
        assert float(entropy(stronger, 1e-9)) <= float(entropy(weaker, 1e-9)) + 2e-9

    def test_bad_tolerance(self):
        with pytest.raises(InputError):
            entropy(golden(), 0.0)


class TestProductShift:
    def test_full_times_full(self):
        p = product_shift(full_shift(A2), full_shift(A2))
        assert float(entropy(p, 1e-10)) == pytest.approx(2.0, abs=1e-9)
        assert count_words(p, 3) == 64

    def test_golden_times_full_additivity(self):
        p = product_shift(golden(), full_shift(A2))
        assert float(entropy(p, 1e-9)) == pytest.approx(GOLDEN_BITS + 1.0, abs=2e-6)
        for n in range(1, 6):
            assert count_words(p, n) == count_words(golden(), n) * 2**n

    def test_product_with_empty(self):
        empty = build_sft(A2, [("0",), ("1",)])
        assert product_shift(golden(), empty).is_empty


class TestWithWindow:
    def test_recode_preserves_language(self, rng):
        for _ in range(20):
            _, _, s = random_sft(rng)
            recoded = with_window(s, s.window + 1)
            assert sofic_equal(s, recoded)

    def test_cannot_shrink(self):
        with pytest.raises(InputError):
            with_window(golden(), 1)


class TestBlockCodes:
    def test_identity_code(self):
        code = BlockCode(0, {("0",): "0", ("1",): "1"}, A2)
        image = apply_block_code(code, golden())
        assert sofic_equal(image, golden())

    def test_constant_factor(self):
        code = BlockCode(0, {("0",): "a", ("1",): "a"}, Alphabet.of(["a"]))
        image = apply_block_code(code, full_shift(A2))
        assert float(entropy(image)) == pytest.approx(0.0, abs=1e-9)

    def test_xor_code_preserves_full_shift(self):
        xor = BlockCode.from_function(1, A2, lambda w: str(int(w[1]) ^ int(w[2])), A2)
        image = apply_block_code(xor, full_shift(A2))
        for n in range(1, 9):
            assert sofic_factors(image, n) == brute_factors("01", [], n, pad=0)
        assert float(entropy(image, 1e-9)) == pytest.approx(1.0, abs=1e-8)

    def test_factor_entropy_never_increases(self, rng):
        for _ in range(10):
            alphabet, _, s = random_sft(rng)
            if s.is_empty:
                continue
            rule = {}
            for sym in alphabet.symbols:
                rule[(sym,)] = "a" if rng.random() < 0.5 else "b"
            code = BlockCode(0, rule, Alphabet.of(["a", "b"]))
            image = apply_block_code(code, s)
            assert float(entropy(image, 1e-9)) <= float(entropy(s, 1e-9)) + 2e-9

    def test_partial_rule_rejected(self):
        code = BlockCode(0, {("0",): "a"}, Alphabet.of(["a"]))
        with pytest.raises(InputError):
            apply_block_code(code, full_shift(A2))
