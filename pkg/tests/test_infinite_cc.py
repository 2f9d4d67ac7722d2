import itertools
import math

import numpy as np
import pytest

from conftest import random_sft
from shiftcc.errors import InputError
from shiftcc.finite_cc import (
    cover_number_exact,
    eq_relation,
    neq_relation,
    tensor_power,
)
from shiftcc.infinite_cc import (
    BLANK,
    PeriodicWord,
    ProtocolTriple,
    common_factor_bound,
    conditional_entropy,
    conditional_entropy_sup,
    eq_protocol,
    eq_shift,
    extract_protocol,
    fooling_certificate,
    lift_protocol,
    protocol_language,
    protocol_validate,
    relation_shift,
    trivial_protocol,
)
from shiftcc.shifts import (
    Alphabet,
    BlockCode,
    build_sft,
    count_words,
    entropy,
    factors,
    full_shift,
    identity_code,
    join_tokens,
    make_sofic,
    product_alphabet,
    product_shift,
    project_tracks,
    split_tokens,
)

A2 = Alphabet.of(["0", "1"])
GOLDEN_BITS = math.log2((1 + math.sqrt(5)) / 2)


def golden():
    return build_sft(A2, [("1", "1")])


def even_shift():
    return make_sofic(A2, {("A", "0", "A"), ("A", "1", "B"), ("B", "1", "A")})


def leq_shift():
    pair = product_alphabet(A2, A2)
    allowed = {join_tokens((a, b)) for a in "01" for b in "01" if a <= b}
    return build_sft(pair, [(t,) for t in pair.symbols if t not in allowed])


class TestValidation:
    def test_eq_protocol_full2(self):
        report = protocol_validate(eq_shift(full_shift(A2)), eq_protocol(full_shift(A2)))
        assert report.valid
        assert report.entropy_z == pytest.approx(1.0, abs=1e-8)

    def test_eq_protocol_golden(self):
        report = protocol_validate(eq_shift(golden()), eq_protocol(golden()))
        assert report.valid
        assert report.entropy_z == pytest.approx(GOLDEN_BITS, abs=1e-6)

    def test_eq_protocol_even_shift(self):
        report = protocol_validate(eq_shift(even_shift()), eq_protocol(even_shift()))
        assert report.valid
        assert report.entropy_z == pytest.approx(GOLDEN_BITS, abs=1e-6)

    def test_eq_protocol_random_sfts(self, rng):
        done = 0
        while done < 20:
            _, _, s = random_sft(rng)
            if s.is_empty:
                continue
            report = protocol_validate(eq_shift(s), eq_protocol(s))
            assert report.valid
            done += 1

    def test_trivial_protocol_on_product(self):
        x, y = full_shift(A2), golden()
        report = protocol_validate(product_shift(x, y), trivial_protocol(x, y))
        assert report.valid and report.entropy_z == 0.0

    def test_trivial_protocol_fails_equality(self):
        x = full_shift(A2)
        report = protocol_validate(eq_shift(x), trivial_protocol(x, x))
        assert not report.valid
        assert report.witness is not None and len(report.witness) <= 2
        a_part, b_part = split_tokens(report.witness[0])
        assert a_part != b_part  # an off-diagonal pair leaks through

    def test_alphabet_mismatch(self):
        p = eq_protocol(full_shift(A2))
        bad_target = full_shift(Alphabet.of(["x"]))
        with pytest.raises(InputError):
            protocol_validate(bad_target, p)

    def test_projection_entropy_monotone(self):
        for p in (eq_protocol(golden()), trivial_protocol(full_shift(A2), full_shift(A2))):
            language = protocol_language(p)
            pair = product_alphabet(p.a, p.b)
            projected = project_tracks(language.graph, [0, 1], pair)
            assert float(entropy(projected, 1e-9)) <= float(entropy(language.graph, 1e-9)) + 2e-9


class TestEqProtocolUnionShift:
    def test_union_of_two_full_shifts(self):
        alpha = Alphabet.of(["3", "4", "5", "6"])
        forbidden = [(x, y) for x in "34" for y in "56"] + [(y, x) for x in "34" for y in "56"]
        union = build_sft(alpha, forbidden)
        assert float(entropy(union, 1e-9)) == pytest.approx(1.0, abs=1e-8)
        report = protocol_validate(eq_shift(union), eq_protocol(union))
        assert report.valid and report.entropy_z == pytest.approx(1.0, abs=1e-8)

    def test_empty_rejected(self):
        empty = build_sft(A2, [("0",), ("1",)])
        with pytest.raises(InputError):
            eq_protocol(empty)


class TestLift:
    def test_degenerate_single_step(self):
        eq1 = eq_relation(1)
        cover = cover_number_exact(eq1)
        lifted = lift_protocol(eq1, cover, 1)
        # with n = 1 there are no blanks: the message shift is full on 2 markers
        assert float(entropy(lifted.z, 1e-9)) == pytest.approx(1.0, abs=1e-8)
        assert protocol_validate(relation_shift(eq1), lifted).valid

    @pytest.mark.parametrize("k", [1])
    def test_four_message_lift_at_two(self, k):
        for rel in (eq_relation(k), neq_relation(k)):
            cover = cover_number_exact(tensor_power(rel, 2))
            assert cover.cover_number == 4
            lifted = lift_protocol(rel, cover, 2)
            assert float(entropy(lifted.z, 1e-9)) == pytest.approx(1.0, abs=1e-6)
            report = protocol_validate(relation_shift(rel), lifted)
            assert report.valid

    def test_marker_spacing(self):
        rel = eq_relation(1)
        cover = cover_number_exact(tensor_power(rel, 3))
        lifted = lift_protocol(rel, cover, 3)
        for w in factors(lifted.z, 3):
            assert sum(1 for s in w if s != BLANK) == 1
        expected = math.log2(cover.cover_number) / 3
        assert float(entropy(lifted.z, 1e-9)) == pytest.approx(expected, abs=1e-6)

    def test_all_ones_lift_zero_entropy(self):
        from shiftcc.finite_cc import all_ones_relation

        rel = all_ones_relation(2, 2)
        cover = cover_number_exact(tensor_power(rel, 3))
        lifted = lift_protocol(rel, cover, 3)
        # one marker letter repeated with a free phase adds no entropy;
        # confirmed by the word-count growth rate
        assert float(entropy(lifted.z, 1e-9)) == pytest.approx(0.0, abs=1e-9)
        c16, c32 = count_words(lifted.z, 16), count_words(lifted.z, 32)
        assert math.log2(c32) / 32 <= math.log2(max(c16, 1)) / 16

    def test_invalid_cover_rejected(self):
        from shiftcc.finite_cc import CoverResult, Rectangle

        eq1 = eq_relation(1)
        bogus = CoverResult((Rectangle(frozenset({0}), frozenset({0})),), 1, 0.0, False)
        with pytest.raises(InputError):
            lift_protocol(eq1, bogus, 1)


class TestExtract:
    @pytest.mark.parametrize("relation_maker", [eq_relation, neq_relation])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_round_trip_accepts_exactly_rn(self, relation_maker, n):
        rel = relation_maker(1)
        cover = cover_number_exact(tensor_power(rel, n) if n > 1 else rel)
        lifted = lift_protocol(rel, cover, n)
        extracted = extract_protocol(lifted, max(n, lifted.z.window))
        m = extracted.n
        power = tensor_power(rel, m)
        assert np.array_equal(extracted.accepted.bits, power.bits)

    def test_extract_beyond_window(self):
        rel = eq_relation(1)
        lifted = lift_protocol(rel, cover_number_exact(rel), 1)
        extracted = extract_protocol(lifted, 2)
        assert np.array_equal(extracted.accepted.bits, tensor_power(rel, 2).bits)

    def test_bit_accounting(self):
        rel = eq_relation(1)
        cover = cover_number_exact(tensor_power(rel, 2))
        lifted = lift_protocol(rel, cover, 2)
        extracted = extract_protocol(lifted, 2)
        c_n = count_words(lifted.z, 2)
        assert c_n == 8 and extracted.window == 2
        assert extracted.bits_reported == pytest.approx(math.log2(8) + 4 * math.log2(2))
        assert extracted.bits_reported == pytest.approx(7.0)

    def test_trivial_protocol_accepts_everything(self):
        x, y = full_shift(A2), full_shift(A2)
        extracted = extract_protocol(trivial_protocol(x, y), 3)
        assert extracted.accepted.bits.all()

    def test_window_precondition(self):
        rel = eq_relation(1)
        lifted = lift_protocol(rel, cover_number_exact(tensor_power(rel, 3)), 3)
        with pytest.raises(InputError):
            extract_protocol(lifted, 2)


class TestConditionalEntropy:
    def test_leq_reference_inputs(self):
        leq = leq_shift()
        cases = [(("0",), 1.0), (("1",), 0.0), (("0", "1"), 0.5)]
        for cycle, expected in cases:
            value = conditional_entropy(leq, PeriodicWord(len(cycle), cycle))
            assert value == pytest.approx(expected, abs=1e-9)

    def test_leq_sup(self):
        report = conditional_entropy_sup(leq_shift(), 1)
        assert report.sup_estimate == pytest.approx(1.0, abs=1e-9)
        assert report.h_y == pytest.approx(1.0, abs=1e-9)
        assert report.induced_bound_estimate == pytest.approx(0.0, abs=1e-9)
        assert report.label == "estimate"

    def test_eq_shift_has_unique_partner(self):
        report = conditional_entropy_sup(eq_shift(full_shift(A2)), 4)
        assert report.sup_estimate == pytest.approx(0.0, abs=1e-9)

    def test_full_product(self):
        product = product_shift(full_shift(A2), full_shift(A2))
        report = conditional_entropy_sup(product, 1)
        assert report.sup_estimate == pytest.approx(1.0, abs=1e-9)

    def test_inadmissible_input(self):
        eq = eq_shift(golden())
        with pytest.raises(InputError):
            conditional_entropy(eq, PeriodicWord(1, ("1",)))  # 11 is forbidden in x

    def test_window_two_alignment(self):
        # pairs shift with memory: allowed words checked against brute growth
        pair = product_alphabet(A2, A2)
        tok = lambda a, b: join_tokens((a, b))
        forbidden = [(tok("1", b1), tok("1", b2)) for b1 in "01" for b2 in "01"]
        s = build_sft(pair, forbidden)  # x may not have two consecutive 1s
        value = conditional_entropy(s, PeriodicWord(2, ("0", "1")))
        assert value == pytest.approx(1.0, abs=1e-9)  # y stays free


class TestFoolingCertificate:
    def test_eq_full_shift(self):
        s = eq_shift(full_shift(A2))
        result = fooling_certificate(s, s)
        assert result.certified
        assert result.h_fooling == pytest.approx(1.0, abs=1e-8)
        assert result.h_cross == pytest.approx(1.0, abs=1e-8)
        assert result.bound_bits == pytest.approx(1.0, abs=1e-8)

    def test_full_product_diagonal_not_certified(self):
        s = product_shift(full_shift(A2), full_shift(A2))
        result = fooling_certificate(s, eq_shift(full_shift(A2)))
        assert not result.certified
        assert result.h_cross == pytest.approx(2.0, abs=1e-8)
        assert result.bound_bits is None

    def test_eq_golden(self):
        s = eq_shift(golden())
        result = fooling_certificate(s, s)
        assert result.certified
        assert result.bound_bits == pytest.approx(GOLDEN_BITS, abs=2e-6)

    def test_not_contained_rejected(self):
        s = eq_shift(golden())
        bigger = eq_shift(full_shift(A2))
        with pytest.raises(InputError):
            fooling_certificate(s, bigger)

    def test_certified_bound_below_protocol_entropy(self):
        # every certified bound is at most the size of a validated protocol
        for base in (full_shift(A2), golden()):
            s = eq_shift(base)
            bound = fooling_certificate(s, s).bound_bits
            report = protocol_validate(s, eq_protocol(base))
            assert report.valid
            assert bound <= report.entropy_z + 2e-6


class TestCommonFactor:
    def test_eq_with_identity_codes(self):
        base = full_shift(A2)
        result = common_factor_bound(eq_shift(base), identity_code(A2), identity_code(A2), base)
        assert result.accepted
        assert result.bound_bits == pytest.approx(1.0, abs=1e-8)

    def test_product_with_constant_codes(self):
        base = full_shift(A2)
        single = Alphabet.of(["s"])
        const = BlockCode(0, {("0",): "s", ("1",): "s"}, single)
        target = full_shift(single)
        result = common_factor_bound(
            product_shift(base, base), const, const, target
        )
        assert result.accepted
        assert result.bound_bits == pytest.approx(0.0, abs=1e-9)

    def test_mismatched_codes_rejected(self):
        base = full_shift(A2)
        flip = BlockCode(0, {("0",): "1", ("1",): "0"}, A2)
        result = common_factor_bound(eq_shift(base), identity_code(A2), flip, base)
        assert not result.accepted
        assert result.witness is not None
        a_part, b_part = split_tokens(result.witness[0])
        assert a_part == b_part == "0" or a_part == b_part == "1"

    def test_non_surjective_rejected(self):
        base = full_shift(A2)
        const = BlockCode(0, {("0",): "0", ("1",): "0"}, A2)
        with pytest.raises(InputError):
            common_factor_bound(eq_shift(base), const, const, base)

    def test_golden_eq_bound(self):
        result = common_factor_bound(
            eq_shift(golden()), identity_code(A2), identity_code(A2), golden()
        )
        assert result.accepted
        assert result.bound_bits == pytest.approx(GOLDEN_BITS, abs=2e-6)
