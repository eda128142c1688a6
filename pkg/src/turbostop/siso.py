"""Soft-in/soft-out decoding of one terminated RSC constituent code.

The decoder runs the forward/backward recursions in the log domain and emits
posterior LLRs for BOTH the systematic and the parity bit of every
information position, under one of two combiners:

* ``log_map``      - exact ln(e^a + e^b), so outputs are true posterior LLRs;
* ``max_log_map``  - max(a, b), whose hard decisions follow the single best
                     path through the trellis.

``brute_force_marginals`` is the independent oracle: it enumerates every
terminated information word and marginalizes the exact joint likelihoods, at
cost 2**k.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .constituent import rsc_encode

COMBINERS = ("log_map", "max_log_map")

#: Log-domain sentinel standing in for minus infinity.
NEG_METRIC = _kernels.NEG_METRIC


def max_star(a, b):
    """Exact ln(e^a + e^b), computed stably as max + ln(1 + e^-|a-b|)."""
    if a >= b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


@dataclass(frozen=True)
class SisoInput:
    """Channel observations and a priori knowledge for one constituent decode.

    ``sys_llr`` and ``par_llr`` cover the k information positions plus this
    encoder's own ``memory`` tail positions; ``apriori`` covers only the k
    information positions (tails never receive a priori information).
    """

    sys_llr: np.ndarray
    par_llr: np.ndarray
    apriori: np.ndarray

    @property
    def k(self):
        return self.apriori.shape[0]


def make_siso_input(sys_llr, par_llr, apriori):
    """Validate lengths/finiteness and pack a SisoInput."""
    sys_llr = np.ascontiguousarray(sys_llr, dtype=np.float64)
    par_llr = np.ascontiguousarray(par_llr, dtype=np.float64)
    apriori = np.ascontiguousarray(apriori, dtype=np.float64)
    if sys_llr.shape != par_llr.shape:
        raise ValueError("systematic and parity LLR vectors must have equal length")
    if apriori.shape[0] > sys_llr.shape[0]:
        raise ValueError("apriori longer than the observation vectors")
    if not (np.all(np.isfinite(sys_llr)) and np.all(np.isfinite(par_llr))
            and np.all(np.isfinite(apriori))):
        raise ValueError("SISO inputs must be finite")
    return SisoInput(sys_llr=sys_llr, par_llr=par_llr, apriori=apriori)


@dataclass(frozen=True)
class SisoOutput:
    """Per-position posterior LLRs (positive favours bit 0) and the extrinsic.

    extrinsic[i] = sys_llr_post[i] - channel sys_llr[i] - apriori[i], exactly.
    """

    sys_llr_post: np.ndarray
    par_llr_post: np.ndarray
    extrinsic: np.ndarray


@dataclass(frozen=True)
class RecursionWorkspace:
    """Normalized forward/backward state metrics (positions+1, num_states)."""

    alpha: np.ndarray
    beta: np.ndarray


@dataclass(frozen=True)
class HardDecisions:
    """Sign decisions of an LLR vector; ``tie`` marks any exactly-zero LLR."""

    bits: np.ndarray
    tie: bool


def hard_decide(llr):
    """Threshold LLRs: positive -> bit 0, negative -> bit 1, zero -> bit 0 + tie."""
    llr = np.asarray(llr, dtype=np.float64)
    bits = (llr < 0.0).astype(np.int8)
    return HardDecisions(bits=bits, tie=bool(np.any(llr == 0.0)))


def branch_metrics(trellis, inp):
    """Per-transition log-domain branch metrics, shape (n, num_states, 2).

    Identical values to the ones the recursions use internally, so a Viterbi
    pass over this table sees exactly the decoder's metric landscape.
    """
    n = inp.sys_llr.shape[0]
    gamma = np.empty((n, trellis.num_states, 2))
    _kernels.branch_metric_table(trellis.parity_out, inp.sys_llr, inp.par_llr,
                                 inp.apriori, gamma)
    return gamma


def siso_decode(trellis, inp, combiner="log_map", normalize=True,
                return_workspace=False):
    """Decode one terminated constituent block.

    Parameters
    ----------
    trellis : Trellis
    inp : SisoInput
        Observation vectors of length k + memory, a priori of length k.
    combiner : {"log_map", "max_log_map"}
    normalize : bool
        Rescale the state metrics each step (the default; outputs are
        invariant to it, it only guards dynamic range).
    return_workspace : bool
        Also return the filled RecursionWorkspace.

    Returns
    -------
    SisoOutput, or (SisoOutput, RecursionWorkspace).
    """
    if combiner not in COMBINERS:
        raise ValueError(f"unknown combiner {combiner!r}")
    n = inp.sys_llr.shape[0]
    k = inp.k
    if n != k + trellis.memory:
        raise ValueError(
            f"observation length {n} != k + memory = {k + trellis.memory}")

    alpha = np.empty((n + 1, trellis.num_states))
    beta = np.empty((n + 1, trellis.num_states))
    sys_post = np.empty(k)
    par_post = np.empty(k)
    _kernels.bcjr(trellis.next_state, trellis.parity_out,
                  inp.sys_llr, inp.par_llr, inp.apriori,
                  combiner == "max_log_map", normalize,
                  alpha, beta, sys_post, par_post)
    out = SisoOutput(
        sys_llr_post=sys_post,
        par_llr_post=par_post,
        extrinsic=sys_post - inp.sys_llr[:k] - inp.apriori,
    )
    if return_workspace:
        return out, RecursionWorkspace(alpha=alpha, beta=beta)
    return out


def brute_force_marginals(trellis, inp, max_k=16):
    """Exact posterior LLRs by enumerating all 2**k terminated info words.

    Independent of the recursions: each word is re-encoded, its joint
    log-likelihood summed directly from the branch-metric definition, and the
    per-position systematic/parity marginals taken with ``np.logaddexp``.
    """
    k = inp.k
    if k > max_k:
        raise ValueError(f"k={k} too large for exhaustive enumeration (max {max_k})")
    m = trellis.memory
    if inp.sys_llr.shape[0] != k + m:
        raise ValueError("observation length must be k + memory")

    apriori_full = np.concatenate([inp.apriori, np.zeros(m)])
    n_words = 1 << k
    metrics = np.empty(n_words)
    sys_labels = np.empty((n_words, k + m), dtype=np.int8)
    par_labels = np.empty((n_words, k + m), dtype=np.int8)
    for w in range(n_words):
        bits = np.array([(w >> i) & 1 for i in range(k)], dtype=np.int8)
        block = rsc_encode(trellis, bits, terminate=True)
        sys_full = np.concatenate([block.systematic, block.tail_systematic])
        par_full = np.concatenate([block.parity, block.tail_parity])
        xs = 1.0 - 2.0 * sys_full
        xp = 1.0 - 2.0 * par_full
        metrics[w] = float(np.sum(0.5 * apriori_full * xs)
                           + np.sum(0.5 * (inp.sys_llr * xs + inp.par_llr * xp)))
        sys_labels[w] = sys_full
        par_labels[w] = par_full

    sys_post = np.empty(k)
    par_post = np.empty(k)
    for i in range(k):
        sel = sys_labels[:, i] == 0
        sys_post[i] = (np.logaddexp.reduce(metrics[sel], initial=-np.inf)
                       - np.logaddexp.reduce(metrics[~sel], initial=-np.inf))
        sel = par_labels[:, i] == 0
        par_post[i] = (np.logaddexp.reduce(metrics[sel], initial=-np.inf)
                       - np.logaddexp.reduce(metrics[~sel], initial=-np.inf))
    return SisoOutput(
        sys_llr_post=sys_post,
        par_llr_post=par_post,
        extrinsic=sys_post - inp.sys_llr[:k] - inp.apriori,
    )
