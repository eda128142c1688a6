"""Rate-1/2 recursive systematic convolutional (RSC) constituent code.

The default generators are the UMTS ones (feedback 1 + D^2 + D^3, forward
1 + D + D^3, 8 states), but the code is parametric so tiny codes can be used
where exhaustive checks are wanted.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import rsc_parity, viterbi


def _degree(poly):
    if poly <= 0:
        raise ValueError("polynomial bitmask must be positive")
    return int(poly).bit_length() - 1


@dataclass(frozen=True)
class RscSpec:
    """Generator polynomials of one RSC encoder.

    Polynomials are coefficient bitmasks with the constant term in bit 0,
    so 1 + D^2 + D^3 is written 0b1101.
    """

    feedback_poly: int
    forward_poly: int
    memory: int

    def __post_init__(self):
        if self.feedback_poly & 1 == 0:
            raise ValueError("feedback polynomial must have a nonzero constant term")
        deg = max(_degree(self.feedback_poly), _degree(self.forward_poly))
        if self.memory != deg:
            raise ValueError(f"memory must equal the higher polynomial degree ({deg})")


#: UMTS constituent code: feedback 1 + D^2 + D^3, forward 1 + D + D^3.
UMTS_SPEC = RscSpec(feedback_poly=0b1101, forward_poly=0b1011, memory=3)


class Trellis:
    """Dense transition tables of one RSC code, indexed by [state, input].

    Attributes
    ----------
    num_states : int
        2**memory.
    next_state : (num_states, 2) int64 ndarray
        Successor state for each (state, input bit).
    parity_out : (num_states, 2) int64 ndarray
        Parity bit emitted on each transition (the systematic label is the
        input bit itself).
    prev_state, prev_input : (num_states, 2) int64 ndarrays
        The two incoming transitions of each state.
    tail_input : (num_states,) int64 ndarray
        Input that steers the state toward zero; feeding it ``memory`` times
        terminates the encoder.

    Instances are immutable after construction and safe to share.
    """

    def __init__(self, spec):
        self.spec = spec
        self.memory = spec.memory
        self.num_states = 1 << spec.memory

        fb_taps = spec.feedback_poly >> 1
        fw_const = spec.forward_poly & 1
        fw_taps = spec.forward_poly >> 1
        mask = self.num_states - 1

        next_state = np.zeros((self.num_states, 2), dtype=np.int64)
        parity_out = np.zeros((self.num_states, 2), dtype=np.int64)
        for s in range(self.num_states):
            fb = bin(fb_taps & s).count("1") & 1
            for u in (0, 1):
                w = u ^ fb
                parity_out[s, u] = (fw_const & w) ^ (bin(fw_taps & s).count("1") & 1)
                next_state[s, u] = ((s << 1) | w) & mask
        self.next_state = next_state
        self.parity_out = parity_out

        prev_state = np.zeros((self.num_states, 2), dtype=np.int64)
        prev_input = np.zeros((self.num_states, 2), dtype=np.int64)
        fill = np.zeros(self.num_states, dtype=np.int64)
        for s in range(self.num_states):
            for u in (0, 1):
                ns = next_state[s, u]
                prev_state[ns, fill[ns]] = s
                prev_input[ns, fill[ns]] = u
                fill[ns] += 1
        if not np.all(fill == 2):
            raise ValueError("trellis is not 2-in/2-out; check the generator polynomials")
        self.prev_state = prev_state
        self.prev_input = prev_input

        # The zero-steering input is the one whose successor has a cleared
        # newest register bit.
        self.tail_input = np.where(next_state[:, 0] & 1 == 0, 0, 1).astype(np.int64)

        for arr in (self.next_state, self.parity_out, self.prev_state,
                    self.prev_input, self.tail_input):
            arr.setflags(write=False)


def build_trellis(spec):
    """Build the dense trellis tables for an RSC generator spec."""
    return Trellis(spec)


@dataclass(frozen=True)
class EncodedBlock:
    """One constituent encoder's output: parity stream plus termination tail."""

    systematic: np.ndarray
    parity: np.ndarray
    tail_systematic: np.ndarray
    tail_parity: np.ndarray
    final_state_before_tail: int


def rsc_encode(trellis, info, terminate=True):
    """Encode an information bit vector with one RSC constituent code.

    Parameters
    ----------
    trellis : Trellis
    info : array-like of {0, 1}, length >= 1
    terminate : bool
        When true, ``memory`` extra (systematic, parity) tail pairs drive the
        encoder back to state 0.

    Returns
    -------
    EncodedBlock
        ``systematic`` echoes ``info``; tail vectors are empty when
        ``terminate`` is false.
    """
    info = np.ascontiguousarray(info, dtype=np.int8)
    if info.ndim != 1 or info.shape[0] < 1:
        raise ValueError("info must be a non-empty 1-D bit vector")
    parity, state = rsc_parity(trellis.next_state, trellis.parity_out, info)

    m = trellis.memory
    tail_sys = np.zeros(m if terminate else 0, dtype=np.int8)
    tail_par = np.zeros(m if terminate else 0, dtype=np.int8)
    final_state = int(state)
    if terminate:
        s = final_state
        for i in range(m):
            u = int(trellis.tail_input[s])
            tail_sys[i] = u
            tail_par[i] = trellis.parity_out[s, u]
            s = int(trellis.next_state[s, u])
        if s != 0:
            raise AssertionError("termination failed to reach state 0")
    return EncodedBlock(
        systematic=info,
        parity=parity,
        tail_systematic=tail_sys,
        tail_parity=tail_par,
        final_state_before_tail=final_state,
    )


@dataclass(frozen=True)
class ViterbiPath:
    """Maximum-metric trellis path: its labels, total metric, and a tie flag."""

    info: np.ndarray
    parity: np.ndarray
    metric: float
    tie: bool


def viterbi_ml_path(trellis, branch_metrics, terminated=True):
    """Best path through the trellis for explicit per-transition metrics.

    Parameters
    ----------
    trellis : Trellis
    branch_metrics : (n, num_states, 2) float ndarray
        Additive metric of the transition leaving ``state`` on ``input`` at
        each position (finite values; see siso.branch_metrics).
    terminated : bool
        Constrain the path to end at state 0 (start is always state 0).

    Returns
    -------
    ViterbiPath
        ``tie`` is set when any survivor (or final-state) selection saw two
        exactly equal reachable metrics; the returned path is then one of the
        maximizers.
    """
    gamma = np.ascontiguousarray(branch_metrics, dtype=np.float64)
    if gamma.ndim != 3 or gamma.shape[1] != trellis.num_states or gamma.shape[2] != 2:
        raise ValueError("branch_metrics must have shape (n, num_states, 2)")
    if gamma.shape[0] < trellis.memory and terminated:
        raise ValueError("terminated path needs at least `memory` positions")
    info, parity, metric, tie = viterbi(
        trellis.next_state, trellis.parity_out, gamma, terminated)
    return ViterbiPath(info=info, parity=parity, metric=float(metric), tie=bool(tie))
