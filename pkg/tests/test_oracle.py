"""Tests for the brute-force multiplicity oracle."""

import pytest

from maskrecon.gadgets import GadgetSpec
from maskrecon.oracle import (BudgetExceededError, StrataSpec,
                              cross_check_sweep, lossy_max_mult,
                              max_multiplicity_exhaustive,
                              max_multiplicity_stratified,
                              multiplicity_histogram, preimage_count,
                              preimage_set, stratified_secrets,
                              tightness_witness)
from maskrecon.zq import Modulus, canon


def brute_preimage(G, x, v):
    """Independent reference: literal loop over the gadget's compute."""
    q = G.q.q
    return [m for m in range(q)
            if G.compute(canon(x, G.q), canon(m, G.q)).val == v]


class TestPreimage:
    def test_identity_always_one(self):
        G = GadgetSpec.identity(Modulus(7))
        for x in range(7):
            for v in range(7):
                assert preimage_count(G, canon(x, G.q), canon(v, G.q)) == 1

    def test_identity_set_example(self):
        G = GadgetSpec.identity(Modulus(7))
        assert [m.val for m in preimage_set(G, canon(3, G.q), canon(5, G.q))] == [5]

    def test_montgomery_mlkem_pair(self):
        G = GadgetSpec.montgomery(Modulus(3329), 16, 28)
        x, v = canon(1000, G.q), canon(500, G.q)
        assert preimage_count(G, x, v) == 2
        got = [m.val for m in preimage_set(G, x, v)]
        assert got == [500, 1267]
        assert got == [m for m in brute_preimage(G, 1000, 500)]

    def test_unmasked_all_or_nothing(self):
        G = GadgetSpec.unmasked(Modulus(7))
        assert preimage_count(G, canon(3, G.q), canon(3, G.q)) == 7
        G5 = GadgetSpec.unmasked(Modulus(5))
        assert preimage_set(G5, canon(2, G5.q), canon(0, G5.q)) == []

    @pytest.mark.parametrize("G", [
        GadgetSpec.identity(Modulus(23)),
        GadgetSpec.barrett(Modulus(23), 3),
        GadgetSpec.montgomery(Modulus(23), 4, 9),
        GadgetSpec.unmasked(Modulus(23)),
        GadgetSpec.lossy(Modulus(23), 4),
    ])
    def test_matches_literal_loop(self, G):
        for x in range(0, 23, 5):
            for v in range(0, 23, 3):
                ref = brute_preimage(G, x, v)
                assert preimage_count(G, canon(x, G.q), canon(v, G.q)) == len(ref)
                assert [m.val for m in
                        preimage_set(G, canon(x, G.q), canon(v, G.q))] == ref


class TestConservation:
    @pytest.mark.parametrize("G", [
        GadgetSpec.identity(Modulus(31)),
        GadgetSpec.barrett(Modulus(31), 5),
        GadgetSpec.montgomery(Modulus(31), 5, 10),
        GadgetSpec.unmasked(Modulus(31)),
        GadgetSpec.lossy(Modulus(31), 7),
    ])
    def test_preimage_counts_sum_to_q(self, G):
        for x in range(31):
            total = sum(preimage_count(G, canon(x, G.q), canon(v, G.q))
                        for v in range(31))
            assert total == 31


class TestHistogram:
    def test_identity_uniform(self):
        G = GadgetSpec.identity(Modulus(5))
        assert multiplicity_histogram(G, canon(2, G.q)) == {1: 5}

    def test_unmasked(self):
        G = GadgetSpec.unmasked(Modulus(7))
        for x in range(7):
            assert multiplicity_histogram(G, canon(x, G.q)) == {0: 6, 7: 1}

    def test_montgomery_balance(self):
        G = GadgetSpec.montgomery(Modulus(101), 5, 12)
        for x in range(101):
            hist = multiplicity_histogram(G, canon(x, G.q))
            a = hist.get(2, 0)
            b = hist.get(1, 0)
            assert b + 2 * a == 101
            assert hist.get(0, 0) == a

    def test_sizes_weighted_sum_is_q(self):
        G = GadgetSpec.lossy(Modulus(53), 9)
        hist = multiplicity_histogram(G, canon(17, G.q))
        assert sum(size * n for size, n in hist.items()) == 53


class TestExhaustive:
    def test_montgomery_mlkem(self):
        rep = max_multiplicity_exhaustive(GadgetSpec.montgomery(Modulus(3329), 16, 28))
        assert rep.global_max == 2
        assert rep.pairs_scanned == 3329 * 3329
        assert rep.mode == "exhaustive"

    def test_barrett_mlkem(self):
        rep = max_multiplicity_exhaustive(GadgetSpec.barrett(Modulus(3329), 16))
        assert rep.global_max == 2

    def test_identity(self):
        rep = max_multiplicity_exhaustive(GadgetSpec.identity(Modulus(3329)))
        assert rep.global_max == 1

    def test_witness_preimage_is_verified(self):
        rep = max_multiplicity_exhaustive(GadgetSpec.barrett(Modulus(97), 4))
        assert len(rep.witness_preimage) == rep.global_max
        G = rep.gadget
        for m in rep.witness_preimage:
            assert G.compute(rep.witness_x, m) == rep.witness_v

    def test_witness_is_lexicographically_smallest(self):
        G = GadgetSpec.barrett(Modulus(53), 3)
        rep = max_multiplicity_exhaustive(G)
        for x in range(53):
            for v in range(53):
                n = preimage_count(G, canon(x, G.q), canon(v, G.q))
                if n == rep.global_max:
                    assert (rep.witness_x.val, rep.witness_v.val) == (x, v)
                    return
        raise AssertionError("no witness found")

    @pytest.mark.parametrize("q,kind", [(7, "i"), (31, "b"), (101, "m")])
    def test_declared_bound_sound_small_q(self, q, kind):
        mod = Modulus(q)
        G = {"i": lambda: GadgetSpec.identity(mod),
             "b": lambda: GadgetSpec.barrett(mod, 4),
             "m": lambda: GadgetSpec.montgomery(mod, 4, 12)}[kind]()
        rep = max_multiplicity_exhaustive(G)
        assert rep.global_max <= G.declared_max_mult

    def test_budget_guard(self):
        with pytest.raises(BudgetExceededError):
            max_multiplicity_exhaustive(GadgetSpec.identity(Modulus(10007)),
                                        budget=10**6)

    def test_workers_do_not_change_result(self):
        G = GadgetSpec.montgomery(Modulus(3329), 16, 28)
        a = max_multiplicity_exhaustive(G, workers=1)
        b = max_multiplicity_exhaustive(G, workers=2)
        assert a == b


class TestStratified:
    def test_secrets_layout(self):
        spec = StrataSpec(n_random=5, n_near_zero=3, n_near_half=3,
                          n_near_top=3, window=4, seed=11)
        pairs = stratified_secrets(Modulus(1009), spec)
        by_stratum = {}
        for x, name in pairs:
            by_stratum.setdefault(name, []).append(x)
        assert by_stratum["near_zero"] == [0, 1, 2]
        assert by_stratum["near_half"] == [504, 505, 506]
        assert by_stratum["near_top"] == [1005, 1006, 1007]
        assert len(by_stratum["random"]) <= 5
        assert [x for x, _ in pairs] == sorted(x for x, _ in pairs)

    def test_same_seed_identical_report(self):
        G = GadgetSpec.montgomery(Modulus(3329), 16, 28)
        spec = StrataSpec(seed=7)
        a = max_multiplicity_stratified(G, spec)
        b = max_multiplicity_stratified(G, spec)
        assert a == b

    def test_stratified_not_above_exhaustive(self):
        G = GadgetSpec.barrett(Modulus(1013), 5)
        full = max_multiplicity_exhaustive(G)
        part = max_multiplicity_stratified(G, StrataSpec(seed=3))
        assert part.global_max <= full.global_max
        assert part.pairs_scanned == part.strata_info["selected"] * 1013

    def test_identity_stays_one(self):
        rep = max_multiplicity_stratified(GadgetSpec.identity(Modulus(997)),
                                          StrataSpec(seed=5))
        assert rep.global_max == 1
        assert all(v <= 1 for v in rep.per_stratum_max.values())

    def test_window_invariant(self):
        with pytest.raises(ValueError):
            StrataSpec(n_near_zero=30, window=20)

    def test_q_window_precondition(self):
        with pytest.raises(ValueError):
            stratified_secrets(Modulus(61), StrataSpec())


class TestTightness:
    @pytest.mark.parametrize("q,s,w", [(3329, 16, 28), (8380417, 23, 56)])
    def test_standard_parameters_have_witness(self, q, s, w):
        got = tightness_witness(Modulus(q), s, w)
        assert got is not None
        x, v = got
        G = GadgetSpec.montgomery(Modulus(q), s, w)
        assert preimage_count(G, x, v) == 2

    def test_offset_zero_gives_none(self):
        # q = 2 divides 2^(w-s) = 2
        assert tightness_witness(Modulus(2), 0, 1) is None

    def test_witness_conditions_hold(self):
        q = Modulus(3329)
        x, v = tightness_witness(q, 16, 28)
        c = 767
        m_direct = (x.val - v.val) % 3329
        assert m_direct <= x.val
        assert (m_direct + c) % 3329 > x.val


class TestCrossCheckSweep:
    def test_exhaustive_valid_width(self):
        rep = cross_check_sweep(Modulus(17), 5, 10)
        assert rep.pairs_checked == 289
        assert rep.agree

    def test_sub_width_counts_mismatches(self):
        rep = cross_check_sweep(Modulus(7), 3, 5)
        assert rep.mismatches == 9
        assert rep.first_mismatch == (0, 5)

    def test_secrets_subset(self):
        rep = cross_check_sweep(Modulus(3329), 16, 28, secrets=[0, 1, 1664, 3328])
        assert rep.pairs_checked == 4 * 3329
        assert rep.agree
        assert rep.mode == "stratified"

    def test_rejects_even_q(self):
        with pytest.raises(ValueError):
            cross_check_sweep(Modulus(6), 2, 5)


def test_lossy_max_mult_examples():
    assert lossy_max_mult(Modulus(7), 3) == 3
    assert lossy_max_mult(Modulus(7), 1) == 1
    assert lossy_max_mult(Modulus(7), 5) == 5
    assert lossy_max_mult(Modulus(12), 5) == 5
