"""Early-stopping criteria for the iterative decoder.

After every half-iteration the loop takes a snapshot of the finishing SISO's
hard decisions; the criteria compare the current snapshot against the most
recent one from the opposite SISO:

* ``pcs``   - re-encode the other SISO's systematic decisions (mapped into the
              current index domain) and compare the regenerated parity with
              the current SISO's parity decisions, over the k info positions;
* ``hda``   - compare the two SISOs' systematic decisions directly;
* ``crc``   - check the appended CRC-24 on the current systematic decisions;
* ``genie`` - compare against the transmitted bits (simulator-only reference);
* ``fixed`` - never stop early.

A criterion is only allowed to fire when none of the soft outputs it consumes
was exactly zero (``tie_guard``); a denied check is recorded as deferred.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import crc_remainder, rsc_parity
from .interleave import apply, apply_inverse

CRITERIA = ("fixed", "hda", "pcs", "crc", "genie")

#: Criteria evaluated per half-iteration in record-all mode ("fixed" never fires).
CHECKED_CRITERIA = ("pcs", "hda", "crc", "genie")


@dataclass(frozen=True)
class HalfIterationSnapshot:
    """Hard decisions of one SISO pass, in that SISO's own index domain.

    half_index counts SISO passes from 1 (SISO1 of iteration 1); which_siso
    is 1 for the natural-order decoder, 2 for the interleaved one.  The tie
    flags mark exactly-zero LLRs in the vectors the decisions came from.
    """

    half_index: int
    which_siso: int
    sys_hard: np.ndarray
    par_hard: np.ndarray
    sys_tie: bool
    par_tie: bool


@dataclass(frozen=True)
class StopDecision:
    """Why the iterative loop halted.

    ``stop`` is true only when an early-stopping criterion fired; hitting the
    iteration cap yields stop=False with reason "max_iters".  deferred_by_tie
    reports whether any check was denied by the zero-LLR guard on the way.
    """

    stop: bool
    half_index: int
    reason: str
    deferred_by_tie: bool


def _map_to_current(current, other_prev, perm):
    if current.half_index != other_prev.half_index + 1:
        raise ValueError("snapshots must come from consecutive half-iterations")
    if current.which_siso == other_prev.which_siso:
        raise ValueError("snapshots must come from opposite SISOs")
    if other_prev.sys_hard.shape[0] != perm.k:
        raise ValueError("snapshot length does not match the interleaver")
    if current.which_siso == 2:
        return apply(perm, other_prev.sys_hard)
    return apply_inverse(perm, other_prev.sys_hard)


def pcs_check(current, other_prev, perm, trellis):
    """Parity-check stop: does the other SISO's re-encoded systematic match
    the current SISO's parity decisions on all k info positions?

    The other SISO's decisions are moved into the current domain (interleaved
    when the current SISO is 2, de-interleaved when it is 1) and re-encoded
    from state 0; tail positions are not compared.
    """
    mapped = np.ascontiguousarray(_map_to_current(current, other_prev, perm),
                                  dtype=np.int8)
    parity, _ = rsc_parity(trellis.next_state, trellis.parity_out, mapped)
    return bool(np.array_equal(parity, current.par_hard))


def hda_check(current, other_prev, perm):
    """Hard-decision stop: do the two SISOs' systematic decisions agree
    bit-for-bit (after mapping into the current index domain)?"""
    mapped = _map_to_current(current, other_prev, perm)
    return bool(np.array_equal(mapped, current.sys_hard))


def genie_check(current, info, perm):
    """Ground-truth stop: current systematic decisions equal the transmitted
    bits in natural order (simulator-only lower-bound criterion)."""
    decided = current.sys_hard if current.which_siso == 1 else \
        apply_inverse(perm, current.sys_hard)
    return bool(np.array_equal(decided, np.asarray(info, dtype=decided.dtype)))


def tie_guard(current, criterion, other_prev=None):
    """May ``criterion`` be evaluated on this half-iteration?

    The guard is scoped to the soft outputs each criterion consumes: hda and
    crc read the current systematic decisions; pcs reads the current parity
    decisions and the opposite SISO's systematic decisions.  genie knows the
    truth and is never deferred.
    """
    if criterion in ("hda", "crc"):
        return not current.sys_tie
    if criterion == "pcs":
        other_tie = other_prev.sys_tie if other_prev is not None else False
        return not (current.par_tie or other_tie)
    if criterion == "genie":
        return True
    if criterion == "fixed":
        return True
    raise ValueError(f"unknown criterion {criterion!r}")


@dataclass(frozen=True)
class CrcSpec:
    """Cyclic redundancy check: zero initial register, no reflection, zero
    XOR-out.  ``poly`` is the full generator bitmask (bit i = coefficient of
    D**i, bit ``width`` set)."""

    width: int
    poly: int

    def __post_init__(self):
        if self.poly >> self.width != 1:
            raise ValueError("generator must have degree exactly `width`")
        if self.poly & 1 == 0:
            raise ValueError("generator must have a nonzero constant term")


#: 24-bit CRC used by the stopping baseline: D^24+D^23+D^6+D^5+D+1.
CRC24 = CrcSpec(width=24, poly=(1 << 24) | (1 << 23) | (1 << 6) | (1 << 5) | (1 << 1) | 1)


def crc_attach(payload, spec=CRC24):
    """Append ``spec.width`` remainder bits so the whole message checks to zero."""
    payload = np.ascontiguousarray(payload, dtype=np.int8)
    if payload.shape[0] < 1:
        raise ValueError("payload must be non-empty")
    padded = np.concatenate([payload, np.zeros(spec.width, dtype=np.int8)])
    rem = int(crc_remainder(padded, spec.poly, spec.width))
    crc_bits = np.array([(rem >> (spec.width - 1 - i)) & 1 for i in range(spec.width)],
                        dtype=np.int8)
    return np.concatenate([payload, crc_bits])


def crc_check(message, spec=CRC24):
    """True iff the message (payload + CRC) divides the generator exactly."""
    message = np.ascontiguousarray(message, dtype=np.int8)
    if message.shape[0] < spec.width + 1:
        raise ValueError("message shorter than the CRC plus one payload bit")
    return int(crc_remainder(message, spec.poly, spec.width)) == 0
