"""Internal interleaver between the two constituent codes.

Provides the standard UMTS block interleaver (prime-field intra-row
permutations plus an inter-row shuffle, valid for 40..5114 bits) and a seeded
uniform-random interleaver for small-block exhaustive tests.
"""

from dataclasses import dataclass

import numpy as np

# (prime p, primitive root v) pairs used by the intra-row permutations.
_PRIME_ROOTS = (
    (7, 3), (11, 2), (13, 2), (17, 3), (19, 2), (23, 5), (29, 2), (31, 3),
    (37, 2), (41, 6), (43, 3), (47, 5), (53, 2), (59, 2), (61, 2), (67, 2),
    (71, 7), (73, 5), (79, 3), (83, 2), (89, 3), (97, 5), (101, 2), (103, 5),
    (107, 2), (109, 6), (113, 3), (127, 3), (131, 2), (137, 3), (139, 2),
    (149, 2), (151, 6), (157, 5), (163, 2), (167, 5), (173, 2), (179, 2),
    (181, 2), (191, 19), (193, 5), (197, 2), (199, 3), (211, 2), (223, 3),
    (227, 2), (229, 6), (233, 3), (239, 7), (241, 7), (251, 6), (257, 3),
)

_PATTERN_20_A = (19, 9, 14, 4, 0, 2, 5, 7, 12, 18, 16, 13, 17, 15, 3, 1, 6, 11, 8, 10)
_PATTERN_20_B = (19, 9, 14, 4, 0, 2, 5, 7, 12, 18, 10, 8, 13, 17, 3, 1, 16, 6, 15, 11)

MIN_BLOCK = 40
MAX_BLOCK = 5114


@dataclass(frozen=True)
class Permutation:
    """Bijective index map of length k.

    ``forward[i]`` is the source index of output position i, so applying the
    permutation reads ``v[forward]``; ``inverse`` undoes it.
    """

    forward: np.ndarray
    inverse: np.ndarray

    @property
    def k(self):
        return self.forward.shape[0]


def _from_forward(forward):
    forward = np.asarray(forward, dtype=np.int64)
    inverse = np.empty_like(forward)
    inverse[forward] = np.arange(forward.shape[0], dtype=np.int64)
    forward.setflags(write=False)
    inverse.setflags(write=False)
    return Permutation(forward=forward, inverse=inverse)


def _is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def build_umts_interleaver(k):
    """The deterministic UMTS internal interleaver for block length k.

    Follows the standard construction: the indices 0..k-1 are written row by
    row into an R x C matrix (R in {5, 10, 20}, C derived from a prime p),
    each row is permuted by powers of a primitive root of p, the rows are
    shuffled, and the matrix is read column by column with out-of-range
    entries pruned.

    Parameters
    ----------
    k : int
        Block length, 40 <= k <= 5114.
    """
    if not MIN_BLOCK <= k <= MAX_BLOCK:
        raise ValueError(f"k={k} outside the supported range [{MIN_BLOCK}, {MAX_BLOCK}]")

    # Number of rows and the inter-row pattern.
    if 40 <= k <= 159:
        rows = 5
        pattern = (4, 3, 2, 1, 0)
    elif 160 <= k <= 200 or 481 <= k <= 530:
        rows = 10
        pattern = (9, 8, 7, 6, 5, 4, 3, 2, 1, 0)
    else:
        rows = 20
        if 2281 <= k <= 2480 or 3161 <= k <= 3210:
            pattern = _PATTERN_20_A
        else:
            pattern = _PATTERN_20_B

    # Prime p and column count.
    if 481 <= k <= 530:
        p, v = 53, 2
        cols = p
    else:
        p = v = None
        for cand, root in _PRIME_ROOTS:
            if k <= rows * (cand + 1):
                p, v = cand, root
                break
        if p is None:  # unreachable for k <= 5114: 20 * 258 > 5114
            raise AssertionError("no prime large enough for block length")
        if k <= rows * (p - 1):
            cols = p - 1
        elif k <= rows * p:
            cols = p
        else:
            cols = p + 1

    # Base sequence s(j) = v**j mod p and the per-row prime increments q_j.
    s = np.empty(p - 1, dtype=np.int64)
    s[0] = 1
    for j in range(1, p - 1):
        s[j] = (v * s[j - 1]) % p

    q = [1]
    cand = 7
    while len(q) < rows:
        if _is_prime(cand) and np.gcd(cand, p - 1) == 1:
            q.append(cand)
        cand += 1
    # Row pattern[j] of the pre-shuffle matrix uses increment q[j].
    r = [0] * rows
    for j in range(rows):
        r[pattern[j]] = q[j]

    # Intra-row permutations u[row][i] = source column of permuted column i.
    u = np.empty((rows, cols), dtype=np.int64)
    for row in range(rows):
        for i in range(min(cols, p - 1)):
            u[row, i] = s[(i * r[row]) % (p - 1)]
        if cols == p - 1:
            u[row, : p - 1] -= 1
        elif cols == p:
            u[row, p - 1] = 0
        else:  # cols == p + 1
            u[row, p - 1] = 0
            u[row, p] = p
    if cols == p + 1 and k == rows * cols:
        u[rows - 1, p], u[rows - 1, 0] = u[rows - 1, 0], u[rows - 1, p]

    # Read column by column through the inter-row shuffle, pruning the pad.
    forward = np.empty(k, dtype=np.int64)
    n = 0
    for i in range(cols):
        for j in range(rows):
            src_row = pattern[j]
            src = src_row * cols + u[src_row, i]
            if src < k:
                forward[n] = src
                n += 1
    if n != k:
        raise AssertionError("pruned read-out did not cover the block")
    return _from_forward(forward)


def build_random_interleaver(k, seed):
    """Uniformly random permutation of length k, deterministic in ``seed``.

    Drawn with numpy's PCG64 generator (``default_rng(seed).permutation``,
    a Fisher-Yates shuffle).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    forward = np.random.default_rng(seed).permutation(k)
    return _from_forward(forward)


def identity_interleaver(k):
    """Identity permutation (handy for plumbing tests)."""
    return _from_forward(np.arange(k, dtype=np.int64))


def apply(perm, v):
    """Reorder ``v`` by the permutation: output[i] = v[forward[i]]."""
    v = np.asarray(v)
    if v.shape[0] != perm.k:
        raise ValueError(f"vector length {v.shape[0]} != permutation length {perm.k}")
    return v[perm.forward]


def apply_inverse(perm, v):
    """Undo ``apply``: apply_inverse(perm, apply(perm, v)) == v."""
    v = np.asarray(v)
    if v.shape[0] != perm.k:
        raise ValueError(f"vector length {v.shape[0]} != permutation length {perm.k}")
    return v[perm.inverse]
