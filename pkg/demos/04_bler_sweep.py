"""Small BLER / average-iterations sweep comparing stopping criteria.

Desk-scale version of the library's main experiment: k=320 keeps the runtime
around a minute. Writes demo_sweep.csv next to this script; plots a PNG too
if matplotlib is importable.
"""

import os.path

from turbostop import DecoderConfig, ExperimentConfig, run_sweep, write_csv

GRID = (1.0, 1.4, 1.8, 2.2)
records = []
for criterion in ("fixed", "hda", "pcs", "crc"):
    cfg = ExperimentConfig(
        k=320,
        ebn0_grid=GRID,
        decoder=DecoderConfig(combiner="max_log_map", criterion=criterion),
        crc_present=(criterion == "crc"),
        min_block_errors=50,
        max_blocks=2000,
        master_seed=11,
    )
    rows = run_sweep(cfg)
    records.extend(rows)
    print(f"--- criterion {criterion} ---")
    for r in rows:
        print(f"{r.ebn0_db:4.1f} dB  bler {r.bler:8.5f}  ber {r.ber:9.6f}  "
              f"avg iters {r.avg_iterations:5.2f}  ({r.blocks_run} blocks)")

out = os.path.join(os.path.dirname(__file__), "demo_sweep.csv")
write_csv(records, out)
print(f"\nwrote {out}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4))
    for criterion in ("fixed", "hda", "pcs", "crc"):
        rows = [r for r in records if r.criterion == criterion]
        ax0.semilogy([r.ebn0_db for r in rows], [max(r.bler, 1e-5) for r in rows],
                     marker="o", label=criterion)
        ax1.plot([r.ebn0_db for r in rows], [r.avg_iterations for r in rows],
                 marker="o", label=criterion)
    ax0.set_xlabel("Eb/N0 (dB)")
    ax0.set_ylabel("BLER")
    ax1.set_xlabel("Eb/N0 (dB)")
    ax1.set_ylabel("average iterations")
    ax0.grid(True, which="both", alpha=0.4)
    ax1.grid(True, alpha=0.4)
    ax1.legend()
    png = os.path.join(os.path.dirname(__file__), "demo_sweep.png")
    fig.tight_layout()
    fig.savefig(png, dpi=120)
    print(f"wrote {png}")
