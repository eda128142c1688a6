"""Walk through the UMTS constituent code: trellis, encoding, termination,
and the Viterbi path on clean channel metrics."""

import numpy as np

from turbostop import (UMTS_SPEC, SisoInput, branch_metrics, build_trellis,
                       rsc_encode, viterbi_ml_path)

trellis = build_trellis(UMTS_SPEC)
print(f"UMTS constituent code: feedback 0b{UMTS_SPEC.feedback_poly:04b}, "
      f"forward 0b{UMTS_SPEC.forward_poly:04b}, {trellis.num_states} states")
print("next_state[state, input]:")
print(trellis.next_state)
print("parity_out[state, input]:")
print(trellis.parity_out)

# The parity stream of an impulse is the power-series expansion of
# forward/feedback over GF(2); the first taps repeat with period 7.
impulse = np.zeros(16, dtype=np.int8)
impulse[0] = 1
print("\nimpulse response:", rsc_encode(trellis, impulse, terminate=False).parity)

rng = np.random.default_rng(1)
info = rng.integers(0, 2, 12).astype(np.int8)
block = rsc_encode(trellis, info)
print(f"\ninfo           : {info}")
print(f"parity         : {block.parity}")
print(f"tail (sys/par) : {block.tail_systematic} / {block.tail_parity} "
      f"(state {block.final_state_before_tail} -> 0)")

# A Viterbi pass over near-noiseless channel LLRs recovers the same path.
sys_full = np.concatenate([block.systematic, block.tail_systematic])
par_full = np.concatenate([block.parity, block.tail_parity])
inp = SisoInput(sys_llr=18.0 * (1.0 - 2.0 * sys_full) + rng.normal(0, 1, 15),
                par_llr=18.0 * (1.0 - 2.0 * par_full) + rng.normal(0, 1, 15),
                apriori=np.zeros(12))
path = viterbi_ml_path(trellis, branch_metrics(trellis, inp))
print(f"\nviterbi info   : {path.info[:12]}  (matches: "
      f"{bool(np.array_equal(path.info[:12], info))})")
print(f"viterbi metric : {path.metric:.2f}, tie={path.tie}")
