"""Numba-compiled inner loops for the encoder, BCJR recursions, Viterbi and CRC.

Kernels operate on plain ndarrays (no domain objects) so they stay cacheable
and GIL-free; the public modules wrap them with the domain types.  All kernels
run with strict IEEE arithmetic (no fastmath): the decoder contracts compare
floating-point results across independent code paths.
"""

import math

import numpy as np
from numba import njit

# Log-domain stand-in for "unreachable".  Large enough that real branch
# metrics are absorbed without changing it, small enough that differences
# between two sentinels stay finite (no NaN the way -inf - -inf would).
NEG_METRIC = -1.0e30


@njit(cache=True, nogil=True)
def rsc_parity(next_state, parity_out, bits):
    """Run the RSC state machine over ``bits`` from state 0.

    Returns (parity, final_state).
    """
    n = bits.shape[0]
    parity = np.empty(n, dtype=np.int8)
    state = 0
    for i in range(n):
        u = bits[i]
        parity[i] = parity_out[state, u]
        state = next_state[state, u]
    return parity, state


@njit(cache=True, nogil=True, inline="always")
def _combine(a, b, use_max):
    """max(a, b) for max-log, exact ln(e^a + e^b) otherwise."""
    if use_max:
        return a if a >= b else b
    if a >= b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


@njit(cache=True, nogil=True)
def branch_metric_table(parity_out, sys_llr, par_llr, apriori, out):
    """Fill out[t, s, u] with the log-domain branch metric of every transition.

    The metric of a transition labelled (systematic bit, parity bit) is
    0.5*(apriori + sys_llr)*x_s + 0.5*par_llr*x_p with x = +1 for bit 0 and
    -1 for bit 1 (positive LLR means bit 0).  Tail positions (t >= len(apriori))
    carry no a priori term.
    """
    n_total = sys_llr.shape[0]
    k = apriori.shape[0]
    n_states = parity_out.shape[0]
    for t in range(n_total):
        apr = apriori[t] if t < k else 0.0
        hs = 0.5 * (apr + sys_llr[t])
        hp = 0.5 * par_llr[t]
        for s in range(n_states):
            for u in range(2):
                g = (hs if u == 0 else -hs) + (hp if parity_out[s, u] == 0 else -hp)
                out[t, s, u] = g


@njit(cache=True, nogil=True)
def bcjr(next_state, parity_out, sys_llr, par_llr, apriori,
         use_max, normalize, alpha, beta, sys_post, par_post):
    """Forward/backward recursions plus per-position systematic and parity LLRs.

    ``alpha``/``beta`` are (n_total+1, n_states) workspaces filled in place;
    outputs are positive-favours-bit-0 LLRs over the first len(apriori)
    positions.  The trellis is assumed terminated (path starts and ends at
    state 0).
    """
    n_total = sys_llr.shape[0]
    k = apriori.shape[0]
    n_states = next_state.shape[0]

    for s in range(n_states):
        alpha[0, s] = NEG_METRIC
    alpha[0, 0] = 0.0

    for t in range(n_total):
        apr = apriori[t] if t < k else 0.0
        hs = 0.5 * (apr + sys_llr[t])
        hp = 0.5 * par_llr[t]
        for s in range(n_states):
            alpha[t + 1, s] = NEG_METRIC
        for s in range(n_states):
            a = alpha[t, s]
            for u in range(2):
                g = (hs if u == 0 else -hs) + (hp if parity_out[s, u] == 0 else -hp)
                ns = next_state[s, u]
                alpha[t + 1, ns] = _combine(alpha[t + 1, ns], a + g, use_max)
        if normalize:
            m = alpha[t + 1, 0]
            for s in range(1, n_states):
                if alpha[t + 1, s] > m:
                    m = alpha[t + 1, s]
            for s in range(n_states):
                alpha[t + 1, s] -= m

    for s in range(n_states):
        beta[n_total, s] = NEG_METRIC
    beta[n_total, 0] = 0.0

    for t in range(n_total - 1, -1, -1):
        apr = apriori[t] if t < k else 0.0
        hs = 0.5 * (apr + sys_llr[t])
        hp = 0.5 * par_llr[t]
        for s in range(n_states):
            acc = NEG_METRIC
            for u in range(2):
                g = (hs if u == 0 else -hs) + (hp if parity_out[s, u] == 0 else -hp)
                acc = _combine(acc, g + beta[t + 1, next_state[s, u]], use_max)
            beta[t, s] = acc
        if normalize:
            m = beta[t, 0]
            for s in range(1, n_states):
                if beta[t, s] > m:
                    m = beta[t, s]
            for s in range(n_states):
                beta[t, s] -= m

    for t in range(k):
        apr = apriori[t]
        hs = 0.5 * (apr + sys_llr[t])
        hp = 0.5 * par_llr[t]
        num_s = NEG_METRIC
        den_s = NEG_METRIC
        num_p = NEG_METRIC
        den_p = NEG_METRIC
        for s in range(n_states):
            a = alpha[t, s]
            for u in range(2):
                p = parity_out[s, u]
                g = (hs if u == 0 else -hs) + (hp if p == 0 else -hp)
                v = a + g + beta[t + 1, next_state[s, u]]
                if u == 0:
                    num_s = _combine(num_s, v, use_max)
                else:
                    den_s = _combine(den_s, v, use_max)
                if p == 0:
                    num_p = _combine(num_p, v, use_max)
                else:
                    den_p = _combine(den_p, v, use_max)
        sys_post[t] = num_s - den_s
        par_post[t] = num_p - den_p


@njit(cache=True, nogil=True)
def viterbi(next_state, parity_out, gamma, terminated):
    """Maximum-metric path through the trellis for explicit branch metrics.

    gamma has shape (n_total, n_states, 2).  Returns (info, parity, metric,
    tie) where tie reports any survivor or final-state selection between two
    exactly equal, reachable metrics.
    """
    n_total = gamma.shape[0]
    n_states = next_state.shape[0]
    metric = np.full(n_states, -np.inf)
    metric[0] = 0.0
    surv = np.full((n_total, n_states), -1, dtype=np.int16)
    tie = False

    for t in range(n_total):
        new = np.full(n_states, -np.inf)
        for s in range(n_states):
            m = metric[s]
            if m == -np.inf:
                continue
            for u in range(2):
                ns = next_state[s, u]
                v = m + gamma[t, s, u]
                if v > new[ns]:
                    new[ns] = v
                    surv[t, ns] = (s << 1) | u
                elif v == new[ns] and v > -np.inf:
                    tie = True
        metric = new

    end = 0
    if not terminated:
        for s in range(1, n_states):
            if metric[s] > metric[end]:
                end = s
            elif metric[s] == metric[end] and metric[s] > -np.inf:
                tie = True

    info = np.empty(n_total, dtype=np.int8)
    parity = np.empty(n_total, dtype=np.int8)
    s = end
    best = metric[end]
    for t in range(n_total - 1, -1, -1):
        packed = surv[t, s]
        ps = packed >> 1
        u = packed & 1
        info[t] = u
        parity[t] = parity_out[ps, u]
        s = ps
    return info, parity, best, tie


@njit(cache=True, nogil=True)
def crc_remainder(bits, poly, width):
    """Remainder of the bit sequence under MSB-first polynomial long division.

    ``poly`` is the full generator bitmask (bit ``width`` set), register
    starts at zero, no reflection, no output XOR.
    """
    mask = (1 << width) - 1
    top = 1 << (width - 1)
    low = poly & mask
    reg = 0
    for i in range(bits.shape[0]):
        carry = reg & top
        reg = ((reg << 1) & mask) | int(bits[i])
        if carry != 0:
            reg ^= low
    return reg


def warmup():
    """Force-compile every kernel on tiny inputs (used before forking workers)."""
    ns = np.array([[0, 1], [1, 0]], dtype=np.int64)
    po = np.array([[0, 1], [1, 0]], dtype=np.int64)
    bits = np.zeros(4, dtype=np.int8)
    rsc_parity(ns, po, bits)
    sys_llr = np.zeros(4)
    par_llr = np.zeros(4)
    apriori = np.zeros(3)
    gamma = np.empty((4, 2, 2))
    branch_metric_table(po, sys_llr, par_llr, apriori, gamma)
    alpha = np.empty((5, 2))
    beta = np.empty((5, 2))
    out_s = np.empty(3)
    out_p = np.empty(3)
    for flag in (True, False):
        bcjr(ns, po, sys_llr, par_llr, apriori, flag, True, alpha, beta, out_s, out_p)
    viterbi(ns, po, gamma, True)
    crc_remainder(bits, (1 << 24) | 0x800063, 24)
