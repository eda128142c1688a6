"""Demonstrate the key claim: PCS and HDA stop on exactly the same
half-iteration under max-log-MAP decoding, and only approximately so under
log-MAP decoding."""

from turbostop import (DecoderConfig, UMTS_SPEC, build_trellis,
                       build_umts_interleaver, run_equivalence_check)

trellis = build_trellis(UMTS_SPEC)
k = 320
perm = build_umts_interleaver(k)
blocks = 2000

print(f"k={k}, {blocks} blocks per point, 8 iterations max\n")
for combiner in ("max_log_map", "log_map"):
    cfg = DecoderConfig(combiner=combiner)
    print(f"--- {combiner} (extrinsic scale {cfg.extrinsic_scale}) ---")
    for ebn0 in (0.5, 1.0, 1.5):
        rep = run_equivalence_check(blocks, cfg, perm, trellis,
                                    ebn0_db=ebn0, seed=2024)
        print(f"{ebn0:4.1f} dB: agree {rep.agree:5d}  pcs-first {rep.pcs_earlier:3d}"
              f"  hda-first {rep.hda_earlier:3d}  tie-deferred {rep.tie_deferred}"
              f"  | mean iters pcs {rep.mean_iterations('pcs'):5.2f}"
              f"  hda {rep.mean_iterations('hda'):5.2f}"
              f"  | bler {rep.bler('pcs'):.4f}/{rep.bler('hda'):.4f}")
    print()

print("Under max-log-MAP every tie-free block agrees: the hard decisions sit")
print("on the single best path, so matching parity re-encodings and matching")
print("systematic decisions are the same event. Under log-MAP the two")
print("criteria drift apart on marginal blocks but track closely near and")
print("above the waterfall.")
