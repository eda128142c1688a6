"""Turbo encoder and the iterative decoding loop with stopping criteria.

The code is the parallel concatenation of two identical RSC encoders joined
by the internal interleaver; each constituent is terminated independently, so
a block of k information bits transmits 3k + 4*memory bits:

    [ systematic | parity1 | parity2 | tail1 sys | tail1 par | tail2 sys | tail2 par ]

Received channel LLRs use the same layout.  The decoder alternates SISO1
(natural order) and SISO2 (interleaved order), feeding each one the other's
extrinsic output scaled by ``extrinsic_scale``; decisions and stopping checks
always use the unscaled outputs.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import channel
from ._parallel import map_chunks, resolve_workers
from .constituent import rsc_encode
from .interleave import apply, apply_inverse
from .siso import COMBINERS, SisoInput, hard_decide, siso_decode
from .stopping import (CRITERIA, HalfIterationSnapshot, StopDecision, crc_check,
                       genie_check, hda_check, pcs_check, tie_guard)


@dataclass(frozen=True)
class TurboCodeword:
    """Encoded block: systematic stream, both parity streams, both tails."""

    systematic: np.ndarray
    parity1: np.ndarray
    parity2: np.ndarray
    tail_sys1: np.ndarray
    tail_par1: np.ndarray
    tail_sys2: np.ndarray
    tail_par2: np.ndarray

    @property
    def k(self):
        return self.systematic.shape[0]

    @property
    def memory(self):
        return self.tail_sys1.shape[0]

    @property
    def transmitted_length(self):
        return 3 * self.k + 4 * self.memory

    def to_bits(self):
        """Flatten into the canonical transmission layout."""
        return np.concatenate([
            self.systematic, self.parity1, self.parity2,
            self.tail_sys1, self.tail_par1, self.tail_sys2, self.tail_par2,
        ])


def turbo_encode(info, perm, trellis):
    """Encode ``info`` with both constituent codes through the interleaver."""
    info = np.ascontiguousarray(info, dtype=np.int8)
    if info.shape[0] != perm.k:
        raise ValueError("info length must equal the interleaver length")
    enc1 = rsc_encode(trellis, info, terminate=True)
    enc2 = rsc_encode(trellis, apply(perm, info), terminate=True)
    return TurboCodeword(
        systematic=info,
        parity1=enc1.parity,
        parity2=enc2.parity,
        tail_sys1=enc1.tail_systematic,
        tail_par1=enc1.tail_parity,
        tail_sys2=enc2.tail_systematic,
        tail_par2=enc2.tail_parity,
    )


def transmit_block(info, perm, trellis, params, rng):
    """Encode, BPSK-modulate, add AWGN and scale into channel LLRs."""
    bits = turbo_encode(info, perm, trellis).to_bits()
    symbols = channel.modulate(bits)
    received = channel.add_noise(symbols, params.sigma, rng)
    return channel.to_channel_llr(received, params.lc)


@dataclass(frozen=True)
class DecoderConfig:
    """Iterative decoder settings.

    extrinsic_scale defaults to 0.75 under max_log_map and 1.0 under log_map
    when left as None.  record_all_criteria additionally evaluates every
    applicable criterion at every half-iteration (observation only; it never
    changes the decoding path).
    """

    combiner: str = "max_log_map"
    extrinsic_scale: float = None
    max_full_iterations: int = 8
    criterion: str = "fixed"
    record_all_criteria: bool = False

    def __post_init__(self):
        if self.combiner not in COMBINERS:
            raise ValueError(f"unknown combiner {self.combiner!r}")
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if self.max_full_iterations < 1:
            raise ValueError("max_full_iterations must be at least 1")
        if self.extrinsic_scale is None:
            scale = 0.75 if self.combiner == "max_log_map" else 1.0
            object.__setattr__(self, "extrinsic_scale", scale)
        if not 0.0 < self.extrinsic_scale <= 1.0:
            raise ValueError("extrinsic_scale must lie in (0, 1]")


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one block decode.

    decided_info is in natural order, taken from the SISO that was running
    when decoding halted.  In record-all mode the flag/deferral maps hold one
    boolean per half-iteration for every evaluated criterion.
    """

    decided_info: np.ndarray
    stop: StopDecision
    half_iterations_used: int
    per_half_criterion_flags: dict = None
    per_half_criterion_deferrals: dict = None


def _natural_decisions(snap, perm):
    if snap.which_siso == 1:
        return snap.sys_hard
    return apply_inverse(perm, snap.sys_hard)


def _evaluate(criterion, snap, other_prev, perm, trellis, crc_spec, true_info):
    """Run one criterion behind its tie guard; returns (permitted, fired)."""
    permitted = tie_guard(snap, criterion,
                          other_prev if criterion == "pcs" else None)
    if not permitted:
        return False, False
    if criterion == "pcs":
        return True, pcs_check(snap, other_prev, perm, trellis)
    if criterion == "hda":
        return True, hda_check(snap, other_prev, perm)
    if criterion == "crc":
        return True, crc_check(_natural_decisions(snap, perm), crc_spec)
    if criterion == "genie":
        return True, genie_check(snap, true_info, perm)
    raise ValueError(f"criterion {criterion!r} cannot be evaluated")


def turbo_decode(llrs, config, perm, trellis, true_info=None, crc_spec=None):
    """Iteratively decode one received block.

    Parameters
    ----------
    llrs : float ndarray, length 3k + 4*memory
        Channel LLRs in the TurboCodeword layout.
    config : DecoderConfig
    perm : Permutation
    trellis : Trellis
    true_info : optional bit vector
        Transmitted bits; required for the genie criterion and enables the
        genie row in record-all mode.
    crc_spec : optional CrcSpec
        Required for the crc criterion (the systematic decisions must carry
        an attached CRC); enables the crc row in record-all mode.

    Returns
    -------
    DecodeResult
    """
    k = perm.k
    m = trellis.memory
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.shape[0] != 3 * k + 4 * m:
        raise ValueError(f"expected {3 * k + 4 * m} LLRs, got {llrs.shape[0]}")
    if config.criterion == "crc" and crc_spec is None:
        raise ValueError("criterion 'crc' needs a crc_spec")
    if config.criterion == "genie" and true_info is None:
        raise ValueError("criterion 'genie' needs the transmitted bits")

    sys_llr = llrs[:k]
    par1_llr = llrs[k:2 * k]
    par2_llr = llrs[2 * k:3 * k]
    t1s = llrs[3 * k:3 * k + m]
    t1p = llrs[3 * k + m:3 * k + 2 * m]
    t2s = llrs[3 * k + 2 * m:3 * k + 3 * m]
    t2p = llrs[3 * k + 3 * m:]

    sys1 = np.concatenate([sys_llr, t1s])
    par1 = np.concatenate([par1_llr, t1p])
    sys2 = np.concatenate([apply(perm, sys_llr), t2s])
    par2 = np.concatenate([par2_llr, t2p])

    scale = config.extrinsic_scale
    max_halves = 2 * config.max_full_iterations

    record = config.record_all_criteria
    rows = []
    if record:
        rows = ["pcs", "hda"]
        if crc_spec is not None:
            rows.append("crc")
        if true_info is not None:
            rows.append("genie")
    flags = {r: np.zeros(max_halves, dtype=bool) for r in rows}
    deferrals = {r: np.zeros(max_halves, dtype=bool) for r in rows}

    apriori1 = np.zeros(k)
    apriori2 = np.zeros(k)
    last_snap = {1: None, 2: None}
    deferred_seen = False
    decision = None
    snap = None

    for half in range(1, max_halves + 1):
        which = 1 if half % 2 == 1 else 2
        if which == 1:
            inp = SisoInput(sys_llr=sys1, par_llr=par1, apriori=apriori1)
        else:
            inp = SisoInput(sys_llr=sys2, par_llr=par2, apriori=apriori2)
        out = siso_decode(trellis, inp, combiner=config.combiner)
        if which == 1:
            apriori2 = scale * apply(perm, out.extrinsic)
        else:
            apriori1 = scale * apply_inverse(perm, out.extrinsic)

        sys_hd = hard_decide(out.sys_llr_post)
        par_hd = hard_decide(out.par_llr_post)
        snap = HalfIterationSnapshot(
            half_index=half, which_siso=which,
            sys_hard=sys_hd.bits, par_hard=par_hd.bits,
            sys_tie=sys_hd.tie, par_tie=par_hd.tie)
        other_prev = last_snap[2 if which == 1 else 1]
        last_snap[which] = snap

        if half < 2:
            continue

        results = {}
        for crit in rows:
            permitted, fired = _evaluate(crit, snap, other_prev, perm,
                                         trellis, crc_spec, true_info)
            flags[crit][half - 1] = fired
            deferrals[crit][half - 1] = not permitted
            results[crit] = (permitted, fired)

        active = config.criterion
        if active != "fixed":
            if active in results:
                permitted, fired = results[active]
            else:
                permitted, fired = _evaluate(active, snap, other_prev, perm,
                                             trellis, crc_spec, true_info)
            if not permitted:
                deferred_seen = True
            elif fired:
                reason = active
                if active == "pcs":
                    reason = "pcs_a" if which == 2 else "pcs_b"
                decision = StopDecision(stop=True, half_index=half,
                                        reason=reason,
                                        deferred_by_tie=deferred_seen)
                break

    if decision is None:
        decision = StopDecision(stop=False, half_index=max_halves,
                                reason="max_iters", deferred_by_tie=deferred_seen)

    return DecodeResult(
        decided_info=_natural_decisions(snap, perm),
        stop=decision,
        half_iterations_used=decision.half_index,
        per_half_criterion_flags=flags if record else None,
        per_half_criterion_deferrals=deferrals if record else None,
    )


@dataclass(frozen=True)
class EquivalenceReport:
    """Per-block comparison of the earliest PCS and HDA stop half-iterations.

    Blocks are partitioned into agree / pcs_earlier / hda_earlier /
    tie_deferred (a block lands in tie_deferred when either criterion was
    denied by the zero-LLR guard at a half-iteration that could still have
    changed its earliest stop).  Mean half-iterations and block errors are
    accumulated over all blocks, crediting max_half_iterations to blocks
    where a criterion never fired.
    """

    k: int
    ebn0_db: float
    combiner: str
    extrinsic_scale: float
    seed: int
    blocks: int
    agree: int
    pcs_earlier: int
    hda_earlier: int
    tie_deferred: int
    max_half_iterations: int
    mean_half_iterations: dict = field(default_factory=dict)
    block_errors: dict = field(default_factory=dict)

    @property
    def disagreements(self):
        return self.pcs_earlier + self.hda_earlier

    def mean_iterations(self, criterion):
        """Average full iterations under ``criterion`` (half-iterations / 2)."""
        return self.mean_half_iterations[criterion] / 2.0

    def bler(self, criterion):
        return self.block_errors[criterion] / self.blocks if self.blocks else 0.0


def _earliest_fire(fired):
    hits = np.flatnonzero(fired)
    return int(hits[0]) + 1 if hits.size else 0


def _deferral_matters(deferred, earliest):
    if earliest == 0:
        return bool(deferred.any())
    return bool(deferred[:earliest - 1].any())


def _equivalence_chunk(args):
    trellis, perm, config, params, seed, start, stop = args
    agree = pcs_earlier = hda_earlier = tie_deferred = 0
    sum_h = {"pcs": 0, "hda": 0}
    errs = {"pcs": 0, "hda": 0}
    max_halves = 2 * config.max_full_iterations
    for b in range(start, stop):
        rng = np.random.default_rng([seed, b])
        info = rng.integers(0, 2, size=perm.k).astype(np.int8)
        llr = transmit_block(info, perm, trellis, params, rng)
        res = turbo_decode(llr, config, perm, trellis, true_info=info)
        flags = res.per_half_criterion_flags
        defs = res.per_half_criterion_deferrals
        h = {c: _earliest_fire(flags[c]) for c in ("pcs", "hda")}
        correct = flags["genie"]
        for c in ("pcs", "hda"):
            used = h[c] if h[c] else max_halves
            sum_h[c] += used
            errs[c] += 0 if correct[used - 1] else 1
        if (_deferral_matters(defs["pcs"], h["pcs"])
                or _deferral_matters(defs["hda"], h["hda"])):
            tie_deferred += 1
        elif h["pcs"] == h["hda"]:
            agree += 1
        elif h["pcs"] != 0 and (h["hda"] == 0 or h["pcs"] < h["hda"]):
            pcs_earlier += 1
        else:
            hda_earlier += 1
    return (stop - start, agree, pcs_earlier, hda_earlier, tie_deferred,
            sum_h["pcs"], sum_h["hda"], errs["pcs"], errs["hda"])


def run_equivalence_check(blocks, config, perm, trellis, ebn0_db, seed,
                          workers=None, chunk_size=256):
    """Decode ``blocks`` noisy blocks recording when PCS and HDA would stop.

    The decoder runs all iterations (criterion fixed) with record-all
    instrumentation, so both criteria are observed on the same trajectory.
    Per-block RNG is seeded by (seed, block index): results are reproducible
    and independent of the worker count.
    """
    k = perm.k
    rate = k / (3.0 * k + 4.0 * trellis.memory)
    params = channel.derive_params(ebn0_db, rate)
    run_config = replace(config, criterion="fixed", record_all_criteria=True)

    chunks = [(trellis, perm, run_config, params, seed, start,
               min(start + chunk_size, blocks))
              for start in range(0, blocks, chunk_size)]
    parts = map_chunks(_equivalence_chunk, chunks, resolve_workers(workers))

    totals = [sum(p[i] for p in parts) for i in range(9)]
    n, agree, pcs_e, hda_e, tie_d, sh_pcs, sh_hda, e_pcs, e_hda = totals
    mean_h = {"pcs": sh_pcs / n if n else 0.0, "hda": sh_hda / n if n else 0.0}
    return EquivalenceReport(
        k=k, ebn0_db=float(ebn0_db), combiner=config.combiner,
        extrinsic_scale=config.extrinsic_scale, seed=seed,
        blocks=n, agree=agree, pcs_earlier=pcs_e, hda_earlier=hda_e,
        tie_deferred=tie_d, max_half_iterations=2 * config.max_full_iterations,
        mean_half_iterations=mean_h,
        block_errors={"pcs": e_pcs, "hda": e_hda},
    )
