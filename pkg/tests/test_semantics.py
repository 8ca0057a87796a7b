"""Tests for the probability / min-entropy layer."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from maskrecon.gadgets import GadgetSpec
from maskrecon.pipeline import PipelineSpec, composition_bound_check
from maskrecon.semantics import (capstone_hypothesis_check, min_entropy_bound,
                                 pipeline_semantic_summary, probability_bound)
from maskrecon.zq import Modulus


class TestProbabilityBound:
    def test_standard_values(self):
        assert probability_bound(2, Modulus(3329)) == Fraction(2, 3329)
        assert probability_bound(2, Modulus(8380417)) == Fraction(2, 8380417)
        assert probability_bound(1, Modulus(97)) == Fraction(1, 97)

    def test_reduced(self):
        assert probability_bound(2, Modulus(10)) == Fraction(1, 5)

    @given(st.integers(2, 5000), st.data())
    def test_exactness(self, q, data):
        m = data.draw(st.integers(0, q))
        assert probability_bound(m, Modulus(q)) * q == m


class TestMinEntropy:
    def test_mlkem_value(self):
        assert min_entropy_bound(2, Modulus(3329)) == pytest.approx(10.70, abs=0.01)

    def test_mldsa_value(self):
        assert min_entropy_bound(2, Modulus(8380417)) == pytest.approx(21.999, abs=0.001)

    def test_multiplicity_one_loses_nothing(self):
        q = Modulus(12289)
        assert min_entropy_bound(1, q) == math.log2(12289)

    @pytest.mark.parametrize("q", [3329, 8380417])
    def test_exactly_one_bit_below_log_q(self, q):
        assert abs(min_entropy_bound(2, Modulus(q)) - (math.log2(q) - 1)) < 1e-12

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            min_entropy_bound(0, Modulus(7))


class TestHypothesisCheck:
    def test_reduction_stages_pass(self):
        q = Modulus(3329)
        stages = [GadgetSpec.barrett(q, 16), GadgetSpec.montgomery(q, 16, 28)]
        assert capstone_hypothesis_check(stages).passed

    def test_unmasked_stage_flagged(self):
        q = Modulus(7)
        got = capstone_hypothesis_check([GadgetSpec.barrett(q, 2),
                                         GadgetSpec.unmasked(q)])
        assert not got.passed
        assert got.stage_index == 1
        assert got.max_mult == 7

    def test_all_identity_passes(self):
        q = Modulus(5)
        assert capstone_hypothesis_check([GadgetSpec.identity(q)] * 3).passed

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            capstone_hypothesis_check([])

    @given(st.lists(st.integers(1, 9), min_size=1, max_size=6))
    def test_definitional_equivalence(self, mults):
        q = Modulus(11)
        stages = [GadgetSpec.identity(q, declared_max_mult=m) for m in mults]
        got = capstone_hypothesis_check(stages)
        assert got.passed == all(m <= 2 for m in mults)
        if not got.passed:
            assert got.stage_index == next(i for i, m in enumerate(mults) if m >= 3)


class TestSemanticSummary:
    def test_depth_independent_probability(self):
        q = Modulus(3329)
        probs = set()
        for k in range(1, 9):
            P = PipelineSpec.of([GadgetSpec.barrett(q, 16)] * k)
            s = pipeline_semantic_summary(P)
            probs.add(s.probability_bound)
            assert s.mask_space == 3329 ** (2 * k - 1)
        assert probs == {Fraction(2, 3329)}

    def test_k1_values(self):
        q = Modulus(7)
        s = pipeline_semantic_summary(PipelineSpec.of([GadgetSpec.barrett(q, 2)]))
        assert s.cardinality_bound == 2
        assert s.mask_space == 7

    def test_lossy_last_stage_uses_its_declared_bound(self):
        q = Modulus(7)
        P = PipelineSpec.of([GadgetSpec.barrett(q, 2), GadgetSpec.lossy(q, 3)])
        s = pipeline_semantic_summary(P)
        assert s.probability_bound == Fraction(3, 7)
        assert not s.capstone_applicable

    def test_entropy_matches_probability(self):
        q = Modulus(3329)
        s = pipeline_semantic_summary(
            PipelineSpec.of([GadgetSpec.montgomery(q, 16, 28)] * 4))
        assert s.min_entropy_bits == pytest.approx(math.log2(3329 / 2), abs=1e-12)

    def test_measured_maxima_stay_below_the_bound(self):
        q = Modulus(5)
        zoo = [GadgetSpec.identity(q), GadgetSpec.barrett(q, 2),
               GadgetSpec.lossy(q, 2)]
        for a in zoo:
            for b in zoo:
                P = PipelineSpec.of([a, b])
                check = composition_bound_check(P)
                s = pipeline_semantic_summary(P)
                assert (Fraction(check.observed_max, P.mask_space)
                        <= s.probability_bound)
