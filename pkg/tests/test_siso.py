import math

import numpy as np
import pytest

from turbostop import (SisoInput, branch_metrics, brute_force_marginals,
                       hard_decide, make_siso_input, max_star, rsc_encode,
                       siso_decode, viterbi_ml_path)

from conftest import random_siso_input


class TestMaxStar:
    def test_symmetric_exact(self):
        assert max_star(0.0, 0.0) == pytest.approx(math.log(2.0), abs=1e-12)

    def test_absorbs_minus_infinity(self):
        assert max_star(3.5, -math.inf) == 3.5
        assert max_star(-math.inf, -2.0) == -2.0

    def test_five_zero(self):
        # ln(e^5 + e^0) evaluated directly
        assert max_star(5.0, 0.0) == pytest.approx(math.log(math.exp(5.0) + 1.0),
                                                   abs=1e-12)
        assert max_star(5.0, 0.0) == pytest.approx(5.0067153, abs=1e-7)

    def test_dominates_max(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            a, b = rng.normal(0, 10, 2)
            assert max_star(a, b) >= max(a, b)
            assert max_star(a, b) == max_star(b, a)


class TestHardDecide:
    def test_signs(self):
        hd = hard_decide(np.array([2.3, -0.1]))
        assert hd.bits.tolist() == [0, 1]
        assert not hd.tie

    def test_exact_zero_sets_tie(self):
        hd = hard_decide(np.array([0.0]))
        assert hd.tie
        assert hd.bits.tolist() == [0]

    def test_all_negative(self):
        hd = hard_decide(np.array([-1.0, -5.0, -0.25]))
        assert hd.bits.tolist() == [1, 1, 1]
        assert not hd.tie


class TestSisoDecode:
    def test_all_zero_inputs_give_zero_llrs(self, umts_trellis):
        inp = SisoInput(sys_llr=np.zeros(11), par_llr=np.zeros(11),
                        apriori=np.zeros(8))
        for combiner in ("log_map", "max_log_map"):
            out = siso_decode(umts_trellis, inp, combiner=combiner)
            assert np.all(out.sys_llr_post == 0.0)
            assert np.all(out.par_llr_post == 0.0)

    def test_near_noiseless_round_trip(self, umts_trellis):
        rng = np.random.default_rng(1)
        for combiner in ("log_map", "max_log_map"):
            for _ in range(20):
                k = int(rng.integers(4, 30))
                info = rng.integers(0, 2, k).astype(np.int8)
                blk = rsc_encode(umts_trellis, info)
                sys_full = np.concatenate([blk.systematic, blk.tail_systematic])
                par_full = np.concatenate([blk.parity, blk.tail_parity])
                inp = SisoInput(sys_llr=25.0 * (1.0 - 2.0 * sys_full),
                                par_llr=25.0 * (1.0 - 2.0 * par_full),
                                apriori=np.zeros(k))
                out = siso_decode(umts_trellis, inp, combiner=combiner)
                assert np.array_equal(hard_decide(out.sys_llr_post).bits, info)
                assert np.array_equal(hard_decide(out.par_llr_post).bits, blk.parity)

    def test_matches_brute_force_k8(self, umts_trellis):
        rng = np.random.default_rng(2)
        for _ in range(100):
            inp = random_siso_input(rng, 8, 3)
            got = siso_decode(umts_trellis, inp, combiner="log_map")
            want = brute_force_marginals(umts_trellis, inp)
            np.testing.assert_allclose(got.sys_llr_post, want.sys_llr_post, atol=1e-6)
            np.testing.assert_allclose(got.par_llr_post, want.par_llr_post, atol=1e-6)

    def test_extrinsic_identity(self, umts_trellis):
        rng = np.random.default_rng(3)
        inp = random_siso_input(rng, 12, 3)
        out = siso_decode(umts_trellis, inp, combiner="log_map")
        np.testing.assert_array_equal(
            out.extrinsic, out.sys_llr_post - inp.sys_llr[:12] - inp.apriori)

    def test_normalization_does_not_change_llrs(self, umts_trellis):
        rng = np.random.default_rng(4)
        for combiner in ("log_map", "max_log_map"):
            for _ in range(20):
                inp = random_siso_input(rng, 8, 3)
                a = siso_decode(umts_trellis, inp, combiner=combiner, normalize=True)
                b = siso_decode(umts_trellis, inp, combiner=combiner, normalize=False)
                np.testing.assert_allclose(a.sys_llr_post, b.sys_llr_post, atol=1e-9)
                np.testing.assert_allclose(a.par_llr_post, b.par_llr_post, atol=1e-9)

    def test_workspace_normalization_invariant(self, umts_trellis):
        rng = np.random.default_rng(5)
        inp = random_siso_input(rng, 10, 3)
        _, ws = siso_decode(umts_trellis, inp, combiner="log_map",
                            return_workspace=True)
        # after normalization each position's best state metric sits at 0
        assert np.allclose(ws.alpha[1:].max(axis=1), 0.0)
        assert np.allclose(ws.beta[:-1].max(axis=1), 0.0)

    def test_length_mismatch_rejected(self, umts_trellis):
        with pytest.raises(ValueError):
            siso_decode(umts_trellis,
                        SisoInput(sys_llr=np.zeros(10), par_llr=np.zeros(10),
                                  apriori=np.zeros(8)))

    def test_unknown_combiner_rejected(self, umts_trellis):
        inp = SisoInput(sys_llr=np.zeros(11), par_llr=np.zeros(11),
                        apriori=np.zeros(8))
        with pytest.raises(ValueError):
            siso_decode(umts_trellis, inp, combiner="sova")

    def test_make_siso_input_validation(self):
        with pytest.raises(ValueError):
            make_siso_input(np.zeros(4), np.zeros(5), np.zeros(2))
        with pytest.raises(ValueError):
            make_siso_input(np.array([np.inf, 0.0]), np.zeros(2), np.zeros(1))

    def test_high_snr_sign_agreement_between_combiners(self, umts_trellis):
        # with channel LLR magnitudes >= 20 on a codeword, the two combiners
        # make identical hard decisions
        rng = np.random.default_rng(6)
        for _ in range(1000):
            k = int(rng.integers(4, 24))
            info = rng.integers(0, 2, k).astype(np.int8)
            blk = rsc_encode(umts_trellis, info)
            sys_full = np.concatenate([blk.systematic, blk.tail_systematic])
            par_full = np.concatenate([blk.parity, blk.tail_parity])
            mag_s = 20.0 + rng.exponential(5.0, k + 3)
            mag_p = 20.0 + rng.exponential(5.0, k + 3)
            inp = SisoInput(sys_llr=mag_s * (1.0 - 2.0 * sys_full),
                            par_llr=mag_p * (1.0 - 2.0 * par_full),
                            apriori=np.zeros(k))
            exact = siso_decode(umts_trellis, inp, combiner="log_map")
            approx = siso_decode(umts_trellis, inp, combiner="max_log_map")
            assert np.array_equal(np.sign(exact.sys_llr_post),
                                  np.sign(approx.sys_llr_post))
            assert np.array_equal(np.sign(exact.par_llr_post),
                                  np.sign(approx.par_llr_post))


class TestBruteForce:
    def test_two_codeword_case_by_hand(self, tiny_trellis):
        # memory-1 code, k=1: codewords are sys/par (0,0|0,0) and (1,1|1,1),
        # so both LLRs reduce to the sum of all input LLRs plus the a priori.
        inp = SisoInput(sys_llr=np.array([1.0, -0.5]),
                        par_llr=np.array([0.25, 0.7]),
                        apriori=np.array([0.3]))
        expect = 0.3 + 1.0 - 0.5 + 0.25 + 0.7
        out = brute_force_marginals(tiny_trellis, inp)
        assert out.sys_llr_post[0] == pytest.approx(expect, abs=1e-12)
        assert out.par_llr_post[0] == pytest.approx(expect, abs=1e-12)
        # the recursions agree on the same closed form
        got = siso_decode(tiny_trellis, inp, combiner="log_map")
        assert got.sys_llr_post[0] == pytest.approx(expect, abs=1e-9)
        assert got.par_llr_post[0] == pytest.approx(expect, abs=1e-9)

    def test_all_zero_inputs(self, umts_trellis):
        inp = SisoInput(sys_llr=np.zeros(7), par_llr=np.zeros(7),
                        apriori=np.zeros(4))
        out = brute_force_marginals(umts_trellis, inp)
        assert np.all(out.sys_llr_post == 0.0)
        assert np.all(out.par_llr_post == 0.0)

    def test_k4_agreement(self, umts_trellis):
        rng = np.random.default_rng(7)
        for _ in range(100):
            inp = random_siso_input(rng, 4, 3)
            got = siso_decode(umts_trellis, inp, combiner="log_map")
            want = brute_force_marginals(umts_trellis, inp)
            np.testing.assert_allclose(got.sys_llr_post, want.sys_llr_post, atol=1e-6)
            np.testing.assert_allclose(got.par_llr_post, want.par_llr_post, atol=1e-6)

    def test_k_too_large_rejected(self, umts_trellis):
        inp = SisoInput(sys_llr=np.zeros(20), par_llr=np.zeros(20),
                        apriori=np.zeros(17))
        with pytest.raises(ValueError):
            brute_force_marginals(umts_trellis, inp)


class TestMlPathProperty:
    def test_max_log_decisions_lie_on_viterbi_path(self, umts_trellis):
        rng = np.random.default_rng(8)
        ties = 0
        for k in (8, 40):
            for _ in range(1000):
                inp = random_siso_input(rng, k, 3)
                out = siso_decode(umts_trellis, inp, combiner="max_log_map")
                s = hard_decide(out.sys_llr_post)
                p = hard_decide(out.par_llr_post)
                path = viterbi_ml_path(umts_trellis, branch_metrics(umts_trellis, inp))
                if s.tie or p.tie or path.tie:
                    ties += 1
                    continue
                assert np.array_equal(s.bits, path.info[:k])
                assert np.array_equal(p.bits, path.parity[:k])
        assert ties <= 20  # exact float ties should be vanishingly rare

    def test_joint_path_consistency(self, umts_trellis):
        # re-encoding the hard systematic decisions reproduces the hard
        # parity decisions (the decisions form one trellis path)
        rng = np.random.default_rng(9)
        for _ in range(500):
            k = 16
            inp = random_siso_input(rng, k, 3)
            out = siso_decode(umts_trellis, inp, combiner="max_log_map")
            s = hard_decide(out.sys_llr_post)
            p = hard_decide(out.par_llr_post)
            if s.tie or p.tie:
                continue
            reenc = rsc_encode(umts_trellis, s.bits, terminate=False)
            assert np.array_equal(reenc.parity, p.bits)
