"""Self-contained oracle suites behind the `turbostop verify` command.

Each suite checks an implementation against an independent route to the same
answer: exhaustive marginalization vs the forward/backward recursions, the
Viterbi path vs max-log hard decisions, permutation bijectivity, and the CRC
round trip.  All randomness is fixed-seed.
"""

import numpy as np

from .constituent import UMTS_SPEC, build_trellis, viterbi_ml_path
from .interleave import build_random_interleaver, build_umts_interleaver
from .siso import (SisoInput, branch_metrics, brute_force_marginals,
                   hard_decide, siso_decode)
from .stopping import crc_attach, crc_check


def _random_siso_input(rng, k, memory, spread=4.0):
    n = k + memory
    return SisoInput(sys_llr=rng.normal(0.0, spread, n),
                     par_llr=rng.normal(0.0, spread, n),
                     apriori=rng.normal(0.0, spread, k))


def check_brute_force_agreement(trials=100, ks=(4, 8), tol=1e-6, seed=2024):
    """log-MAP outputs vs exhaustive posterior marginals."""
    trellis = build_trellis(UMTS_SPEC)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in ks:
        for _ in range(trials):
            inp = _random_siso_input(rng, k, trellis.memory)
            got = siso_decode(trellis, inp, combiner="log_map")
            want = brute_force_marginals(trellis, inp)
            worst = max(worst,
                        float(np.max(np.abs(got.sys_llr_post - want.sys_llr_post))),
                        float(np.max(np.abs(got.par_llr_post - want.par_llr_post))))
    return worst <= tol, f"max |log-MAP - exhaustive| = {worst:.3g} (tol {tol:g})"


def check_viterbi_agreement(trials=10000, ks=(8, 40), seed=2025):
    """max-log-MAP hard decisions vs the Viterbi path on identical metrics."""
    trellis = build_trellis(UMTS_SPEC)
    rng = np.random.default_rng(seed)
    ties = 0
    mismatches = 0
    total = 0
    for k in ks:
        for _ in range(trials):
            inp = _random_siso_input(rng, k, trellis.memory)
            out = siso_decode(trellis, inp, combiner="max_log_map")
            sys_hd = hard_decide(out.sys_llr_post)
            par_hd = hard_decide(out.par_llr_post)
            path = viterbi_ml_path(trellis, branch_metrics(trellis, inp))
            total += 1
            if sys_hd.tie or par_hd.tie or path.tie:
                ties += 1
                continue
            if not (np.array_equal(sys_hd.bits, path.info[:k])
                    and np.array_equal(par_hd.bits, path.parity[:k])):
                mismatches += 1
    return mismatches == 0, (
        f"{mismatches} mismatches over {total} trials ({ties} tie-excluded)")


def check_interleaver_bijectivity(ks=(40, 320, 990, 5000, 5114), seed=7):
    """UMTS and random interleavers are permutations that round-trip."""
    for k in ks:
        for perm in (build_umts_interleaver(k), build_random_interleaver(k, seed)):
            if not np.array_equal(np.sort(perm.forward), np.arange(k)):
                return False, f"forward map is not a bijection at k={k}"
            if not np.array_equal(perm.forward[perm.inverse], np.arange(k)):
                return False, f"inverse does not undo forward at k={k}"
    return True, f"bijective at k in {list(ks)}"


def check_crc_round_trip(lengths=(40, 990, 5000), trials=50, seed=11):
    """attach-then-check always passes; any single bit flip fails."""
    rng = np.random.default_rng(seed)
    for n in lengths:
        for _ in range(trials):
            payload = rng.integers(0, 2, size=n).astype(np.int8)
            msg = crc_attach(payload)
            if not crc_check(msg):
                return False, f"round trip failed at length {n}"
        flipped = crc_attach(rng.integers(0, 2, size=64).astype(np.int8))
        pos = int(rng.integers(0, flipped.shape[0]))
        flipped[pos] ^= 1
        if crc_check(flipped):
            return False, f"single-bit flip at {pos} went undetected"
    return True, f"round trip + flip detection at lengths {list(lengths)}"


def check_turbo_round_trip(trials=25, k=40, seed=13):
    """Noiseless encode/decode recovers the information bits at half 2."""
    from . import channel
    from .pipeline import DecoderConfig, transmit_block, turbo_decode

    trellis = build_trellis(UMTS_SPEC)
    perm = build_umts_interleaver(k)
    params = channel.derive_params(60.0, k / (3.0 * k + 4.0 * trellis.memory))
    rng = np.random.default_rng(seed)
    config = DecoderConfig(combiner="max_log_map", criterion="hda")
    for _ in range(trials):
        info = rng.integers(0, 2, size=k).astype(np.int8)
        llr = transmit_block(info, perm, trellis, params, rng)
        res = turbo_decode(llr, config, perm, trellis)
        if not np.array_equal(res.decided_info, info):
            return False, "noiseless decode returned wrong bits"
        if res.half_iterations_used != 2:
            return False, f"noiseless decode used {res.half_iterations_used} halves"
    return True, f"{trials} noiseless blocks recovered at half-iteration 2"


SUITES = (
    ("brute-force marginals vs log-MAP", check_brute_force_agreement),
    ("Viterbi path vs max-log decisions", check_viterbi_agreement),
    ("interleaver bijectivity", check_interleaver_bijectivity),
    ("CRC round trip", check_crc_round_trip),
    ("noiseless turbo round trip", check_turbo_round_trip),
)


def run_verification(verbose_print=None):
    """Run every suite; returns list of (name, ok, detail)."""
    results = []
    for name, fn in SUITES:
        ok, detail = fn()
        results.append((name, ok, detail))
        if verbose_print is not None:
            verbose_print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return results
