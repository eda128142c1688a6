"""Command-line front end: Monte Carlo sweeps, the PCS/HDA agreement checker,
and the oracle verification suites.

Defaults follow the standard UMTS setup: 8 iterations, UMTS interleaver,
extrinsic scale 0.75 for max-log-MAP (1.0 for log-MAP).  Every run echoes its
fully materialized configuration as key=value lines; re-running with the
echoed values reproduces the output byte for byte.  Worker count comes from
the TURBOSTOP_WORKERS environment variable (default: available parallelism).
"""

import argparse
import sys

from .constituent import UMTS_SPEC, build_trellis
from .harness import ExperimentConfig, build_permutation, run_sweep, write_csv
from .pipeline import DecoderConfig, run_equivalence_check
from .verification import run_verification

_DECODER_NAMES = {"log-map": "log_map", "max-log-map": "max_log_map"}


def _parse_ebn0(text):
    """Comma list ('0.0,0.5,1.0') or start:step:stop ('0.0:0.2:1.6', inclusive)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("range must be start:step:stop")
        start, step, stop = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError("need step > 0 and stop >= start")
        n = int(round((stop - start) / step)) + 1
        return tuple(round(start + i * step, 10) for i in range(n))
    return tuple(float(p) for p in text.split(","))


def _add_common(p):
    p.add_argument("--k", type=int, default=990, help="information block length")
    p.add_argument("--decoder", choices=sorted(_DECODER_NAMES), default="max-log-map")
    p.add_argument("--scale", type=float, default=None,
                   help="extrinsic scaling factor (default 0.75 max-log, 1.0 log-MAP)")
    p.add_argument("--max-iter", type=int, default=8, dest="max_iter")
    p.add_argument("--interleaver", choices=("umts", "random"), default="umts")
    p.add_argument("--seed", type=int, default=0, help="master seed")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="turbostop",
        description="Turbo decoding with PCS/HDA/CRC early stopping: "
                    "simulation sweeps, criterion agreement checks, oracle suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a BLER/iterations sweep and write CSV")
    _add_common(sim)
    sim.add_argument("--ebn0", type=_parse_ebn0, default=(0.0, 0.5, 1.0),
                     help="comma list or start:step:stop, in dB")
    sim.add_argument("--criterion", choices=("fixed", "hda", "pcs", "crc", "genie"),
                     default="fixed")
    sim.add_argument("--min-block-errors", type=int, default=100)
    sim.add_argument("--max-blocks", type=int, default=10000)
    sim.add_argument("--crc", action="store_true",
                     help="attach a CRC-24 inside the k-bit block")
    sim.add_argument("--out", default="results.csv", help="output CSV path")

    eq = sub.add_parser("equivalence",
                        help="per-block earliest-stop comparison of PCS vs HDA")
    _add_common(eq)
    eq.add_argument("--ebn0", type=_parse_ebn0, default=(0.5,),
                    help="comma list or start:step:stop, in dB")
    eq.add_argument("--blocks", type=int, default=10000)

    sub.add_parser("verify", help="run the oracle suites (nonzero exit on violation)")
    return parser


def _echo(pairs):
    print("config " + " ".join(f"{k}={v}" for k, v in pairs))


def _decoder_config(args, criterion="fixed", record=False):
    return DecoderConfig(
        combiner=_DECODER_NAMES[args.decoder],
        extrinsic_scale=args.scale,
        max_full_iterations=args.max_iter,
        criterion=criterion,
        record_all_criteria=record,
    )


def _cmd_simulate(args):
    if args.criterion == "crc" and not args.crc:
        raise SystemExit("error: --criterion crc requires --crc "
                         "(no CRC is attached otherwise)")
    decoder = _decoder_config(args, criterion=args.criterion)
    cfg = ExperimentConfig(
        k=args.k, ebn0_grid=args.ebn0, decoder=decoder,
        interleaver=args.interleaver, interleaver_seed=args.seed,
        crc_present=args.crc, min_block_errors=args.min_block_errors,
        max_blocks=args.max_blocks, master_seed=args.seed)
    _echo([("command", "simulate"), ("k", cfg.k),
           ("ebn0", ",".join(str(e) for e in cfg.ebn0_grid)),
           ("decoder", args.decoder), ("scale", decoder.extrinsic_scale),
           ("criterion", args.criterion), ("max_iter", args.max_iter),
           ("interleaver", args.interleaver), ("seed", args.seed),
           ("min_block_errors", cfg.min_block_errors),
           ("max_blocks", cfg.max_blocks), ("crc", int(cfg.crc_present)),
           ("out", args.out)])
    records = run_sweep(cfg)
    write_csv(records, args.out)
    for r in records:
        print(f"point ebn0_db={r.ebn0_db} blocks={r.blocks_run} "
              f"bler={r.bler} ber={r.ber} avg_iterations={r.avg_iterations} "
              f"tie_deferrals={r.tie_deferrals}")
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_equivalence(args):
    decoder = _decoder_config(args)
    trellis = build_trellis(UMTS_SPEC)
    cfg = ExperimentConfig(k=args.k, ebn0_grid=args.ebn0, decoder=decoder,
                           interleaver=args.interleaver,
                           interleaver_seed=args.seed, master_seed=args.seed)
    perm = build_permutation(cfg)
    _echo([("command", "equivalence"), ("k", args.k),
           ("ebn0", ",".join(str(e) for e in args.ebn0)),
           ("decoder", args.decoder), ("scale", decoder.extrinsic_scale),
           ("max_iter", args.max_iter), ("interleaver", args.interleaver),
           ("seed", args.seed), ("blocks", args.blocks)])

    reports = [run_equivalence_check(args.blocks, decoder, perm, trellis,
                                     ebn0_db=e, seed=args.seed)
               for e in args.ebn0]
    for rep in reports:
        print(f"ebn0_db={rep.ebn0_db} blocks={rep.blocks} agree={rep.agree} "
              f"pcs_earlier={rep.pcs_earlier} hda_earlier={rep.hda_earlier} "
              f"tie_deferred={rep.tie_deferred} "
              f"disagreements={rep.disagreements} "
              f"avg_iter_pcs={rep.mean_iterations('pcs')} "
              f"avg_iter_hda={rep.mean_iterations('hda')} "
              f"bler_pcs={rep.bler('pcs')} bler_hda={rep.bler('hda')}")

    header = f"{'Eb/N0':>6} {'blocks':>7} {'agree':>7} {'pcs<':>6} {'hda<':>6} {'tie':>5}"
    print(header)
    for rep in reports:
        print(f"{rep.ebn0_db:>6.2f} {rep.blocks:>7d} {rep.agree:>7d} "
              f"{rep.pcs_earlier:>6d} {rep.hda_earlier:>6d} {rep.tie_deferred:>5d}")
    return 0


def _cmd_verify(_args):
    results = run_verification(verbose_print=print)
    return 0 if all(ok for _, ok, _ in results) else 1


def main(argv=None):
    args = _build_parser().parse_args(argv)
    handlers = {"simulate": _cmd_simulate,
                "equivalence": _cmd_equivalence,
                "verify": _cmd_verify}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
