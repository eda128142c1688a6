"""Monte Carlo experiment runner: SNR sweeps, error statistics, CSV output.

Every block gets its own RNG seeded by (master seed, grid index of the SNR
point, block index), so a point's statistics are bit-identical no matter how
many workers share the load.  A point stops after ``min_block_errors`` block
errors or ``max_blocks`` blocks, whichever comes first; the error-count rule
is applied at fixed batch boundaries to keep the number of simulated blocks
scheduling-independent.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import channel
from ._parallel import map_chunks, resolve_workers
from .constituent import UMTS_SPEC, build_trellis
from .interleave import build_random_interleaver, build_umts_interleaver
from .pipeline import DecoderConfig, transmit_block, turbo_decode
from .stopping import CRC24, crc_attach

#: Blocks simulated between applications of the stop-on-errors rule.
BATCH_BLOCKS = 512
#: Blocks handed to one worker task.
CHUNK_BLOCKS = 64


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo experiment: code/interleaver setup, SNR grid, decoder.

    ``k`` is the interleaver (code information) length; with ``crc_present``
    the random payload is k-24 bits and a CRC-24 is attached before encoding.
    """

    k: int
    ebn0_grid: tuple
    decoder: DecoderConfig
    interleaver: str = "umts"
    interleaver_seed: int = 0
    crc_present: bool = False
    min_block_errors: int = 100
    max_blocks: int = 10000
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ebn0_grid", tuple(float(x) for x in self.ebn0_grid))
        if not self.ebn0_grid:
            raise ValueError("ebn0_grid must be non-empty")
        if any(b <= a for a, b in zip(self.ebn0_grid, self.ebn0_grid[1:])):
            raise ValueError("ebn0_grid must be strictly increasing")
        if self.interleaver not in ("umts", "random"):
            raise ValueError("interleaver must be 'umts' or 'random'")
        if self.decoder.criterion == "crc" and not self.crc_present:
            raise ValueError("criterion 'crc' requires crc_present")
        if self.crc_present and self.k <= CRC24.width:
            raise ValueError("k must exceed the CRC width when crc_present")
        if self.min_block_errors < 1 or self.max_blocks < 1:
            raise ValueError("min_block_errors and max_blocks must be positive")

    @property
    def k_payload(self):
        return self.k - CRC24.width if self.crc_present else self.k


@dataclass(frozen=True)
class SimRecord:
    """Accumulated statistics of one (configuration, SNR) point."""

    ebn0_db: float
    k: int
    combiner: str
    criterion: str
    scale: float
    blocks_run: int
    block_errors: int
    bit_errors: int
    bler: float
    ber: float
    avg_iterations: float
    tie_deferrals: int
    effective_rate: float
    seed: int


def build_permutation(cfg):
    if cfg.interleaver == "umts":
        return build_umts_interleaver(cfg.k)
    return build_random_interleaver(cfg.k, cfg.interleaver_seed)


def _point_chunk(args):
    """Simulate blocks [start, stop) of one SNR point; returns integer counters."""
    cfg, ebn0_db, point_index, start, stop = args
    trellis = build_trellis(UMTS_SPEC)
    perm = build_permutation(cfg)
    rate = cfg.k / (3.0 * cfg.k + 4.0 * trellis.memory)
    params = channel.derive_params(ebn0_db, rate)
    payload_len = cfg.k_payload
    crc_spec = CRC24 if cfg.crc_present else None

    block_errors = 0
    bit_errors = 0
    halves = 0
    deferred = 0
    for b in range(start, stop):
        rng = np.random.default_rng([cfg.master_seed, point_index, b])
        payload = rng.integers(0, 2, size=payload_len).astype(np.int8)
        info = crc_attach(payload) if cfg.crc_present else payload
        llr = transmit_block(info, perm, trellis, params, rng)
        res = turbo_decode(llr, cfg.decoder, perm, trellis,
                           true_info=info, crc_spec=crc_spec)
        errs = int(np.count_nonzero(res.decided_info[:payload_len] != payload))
        bit_errors += errs
        block_errors += 1 if errs else 0
        halves += res.half_iterations_used
        deferred += 1 if res.stop.deferred_by_tie else 0
    return stop - start, block_errors, bit_errors, halves, deferred


def run_point(cfg, ebn0_db, workers=None):
    """Simulate one SNR point of the experiment until its stopping rule fires.

    ``ebn0_db`` must be a member of cfg.ebn0_grid (its grid index feeds the
    per-block seeding).
    """
    ebn0_db = float(ebn0_db)
    try:
        point_index = cfg.ebn0_grid.index(ebn0_db)
    except ValueError:
        raise ValueError(f"{ebn0_db} dB is not on the experiment grid") from None
    workers = resolve_workers(workers)

    blocks = block_errors = bit_errors = halves = deferred = 0
    while blocks < cfg.max_blocks and block_errors < cfg.min_block_errors:
        batch_end = min(blocks + BATCH_BLOCKS, cfg.max_blocks)
        chunks = [(cfg, ebn0_db, point_index, s, min(s + CHUNK_BLOCKS, batch_end))
                  for s in range(blocks, batch_end, CHUNK_BLOCKS)]
        for part in map_chunks(_point_chunk, chunks, workers):
            block_errors += part[1]
            bit_errors += part[2]
            halves += part[3]
            deferred += part[4]
        blocks = batch_end

    payload_len = cfg.k_payload
    return SimRecord(
        ebn0_db=ebn0_db,
        k=cfg.k,
        combiner=cfg.decoder.combiner,
        criterion=cfg.decoder.criterion,
        scale=cfg.decoder.extrinsic_scale,
        blocks_run=blocks,
        block_errors=block_errors,
        bit_errors=bit_errors,
        bler=block_errors / blocks,
        ber=bit_errors / (blocks * payload_len),
        avg_iterations=halves / blocks / 2.0,
        tie_deferrals=deferred,
        effective_rate=payload_len / (3.0 * cfg.k + 4.0 * UMTS_SPEC.memory),
        seed=cfg.master_seed,
    )


def run_sweep(cfg, workers=None):
    """run_point over the whole grid, in order."""
    return [run_point(cfg, e, workers=workers) for e in cfg.ebn0_grid]


def crc_rate_shift_db(k_payload):
    """SNR penalty of carrying a 24-bit CRC inside a k-bit information block:
    10*log10(k / (k - 24)) dB."""
    if k_payload <= 24:
        raise ValueError("block length must exceed the 24-bit CRC")
    return 10.0 * math.log10(k_payload / (k_payload - 24.0))


CSV_COLUMNS = ("ebn0_db", "k", "combiner", "criterion", "scale", "blocks",
               "block_errors", "bler", "ber", "avg_iterations",
               "tie_deferrals", "effective_rate", "seed")


def write_csv(records, path):
    """Write sim records as CSV with a fixed header and deterministic order.

    Rows are sorted by (combiner, criterion, ebn0_db); floats use repr
    (shortest round-trip, '.' decimal point), so equal-seed runs produce
    byte-identical files.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    records.sort(key=lambda r: (r.combiner, r.criterion, r.ebn0_db))
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(",".join(str(v) for v in (
            r.ebn0_db, r.k, r.combiner, r.criterion, r.scale, r.blocks_run,
            r.block_errors, r.bler, r.ber, r.avg_iterations, r.tie_deferrals,
            r.effective_rate, r.seed)))
    text = "\n".join(lines) + "\n"
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path!r}: {exc}") from exc


def wilson_interval(errors, trials, z=1.959963984540054):
    """95% (by default) Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = errors / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)
