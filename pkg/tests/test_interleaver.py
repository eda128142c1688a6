import numpy as np
import pytest

from turbostop import (apply, apply_inverse, build_random_interleaver,
                       build_umts_interleaver, identity_interleaver)

# Independent transcription of the UMTS internal-interleaver procedure,
# written matrix-first (explicit padding, in-place row permutation, row
# shuffle, column read-out) rather than index arithmetic, as a
# cross-implementation oracle.

_PV = {7: 3, 11: 2, 13: 2, 17: 3, 19: 2, 23: 5, 29: 2, 31: 3, 37: 2, 41: 6,
       43: 3, 47: 5, 53: 2, 59: 2, 61: 2, 67: 2, 71: 7, 73: 5, 79: 3, 83: 2,
       89: 3, 97: 5, 101: 2, 103: 5, 107: 2, 109: 6, 113: 3, 127: 3, 131: 2,
       137: 3, 139: 2, 149: 2, 151: 6, 157: 5, 163: 2, 167: 5, 173: 2, 179: 2,
       181: 2, 191: 19, 193: 5, 197: 2, 199: 3, 211: 2, 223: 3, 227: 2,
       229: 6, 233: 3, 239: 7, 241: 7, 251: 6, 257: 3}


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def reference_umts_interleaver(k):
    if k <= 159:
        rows, pattern = 5, [4, 3, 2, 1, 0]
    elif k <= 200 or 481 <= k <= 530:
        rows, pattern = 10, list(range(9, -1, -1))
    else:
        rows = 20
        if 2281 <= k <= 2480 or 3161 <= k <= 3210:
            pattern = [19, 9, 14, 4, 0, 2, 5, 7, 12, 18,
                       16, 13, 17, 15, 3, 1, 6, 11, 8, 10]
        else:
            pattern = [19, 9, 14, 4, 0, 2, 5, 7, 12, 18,
                       10, 8, 13, 17, 3, 1, 16, 6, 15, 11]

    if 481 <= k <= 530:
        p = 53
        cols = p
    else:
        p = next(q for q in sorted(_PV) if k <= rows * (q + 1))
        if k <= rows * (p - 1):
            cols = p - 1
        elif k <= rows * p:
            cols = p
        else:
            cols = p + 1
    v = _PV[p]

    s = [1]
    for _ in range(p - 2):
        s.append((v * s[-1]) % p)

    q = [1]
    c = 7
    while len(q) < rows:
        if all(c % f for f in range(2, c)) and _gcd(c, p - 1) == 1:
            q.append(c)
        c += 1
    r = {pattern[j]: q[j] for j in range(rows)}

    # pad with sentinels, fill row by row
    matrix = [[row * cols + col if row * cols + col < k else None
               for col in range(cols)] for row in range(rows)]

    for row in range(rows):
        if cols == p - 1:
            permuted = [matrix[row][s[(i * r[row]) % (p - 1)] - 1]
                        for i in range(p - 1)]
        elif cols == p:
            permuted = [matrix[row][s[(i * r[row]) % (p - 1)]]
                        for i in range(p - 1)] + [matrix[row][0]]
        else:
            permuted = ([matrix[row][s[(i * r[row]) % (p - 1)]]
                         for i in range(p - 1)]
                        + [matrix[row][0], matrix[row][p]])
            if k == rows * cols and row == rows - 1:
                permuted[p], permuted[0] = permuted[0], permuted[p]
        matrix[row] = permuted

    shuffled = [matrix[pattern[j]] for j in range(rows)]
    out = [shuffled[j][i] for i in range(cols) for j in range(rows)
           if shuffled[j][i] is not None]
    return out


class TestUmtsInterleaver:
    @pytest.mark.parametrize("k", [40, 48, 159, 160, 200, 201, 320, 481, 530,
                                   990, 2281, 2480, 3161, 3210, 5000, 5114])
    def test_matches_independent_transcription(self, k):
        perm = build_umts_interleaver(k)
        assert perm.forward.tolist() == reference_umts_interleaver(k)

    @pytest.mark.parametrize("k", [40, 320, 990, 5000, 5114])
    def test_bijective(self, k):
        perm = build_umts_interleaver(k)
        assert np.array_equal(np.sort(perm.forward), np.arange(k))
        assert np.array_equal(perm.forward[perm.inverse], np.arange(k))
        assert np.array_equal(perm.inverse[perm.forward], np.arange(k))

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            build_umts_interleaver(39)
        with pytest.raises(ValueError):
            build_umts_interleaver(5115)


class TestRandomInterleaver:
    def test_k1_is_identity(self):
        perm = build_random_interleaver(1, seed=9)
        assert perm.forward.tolist() == [0]

    def test_deterministic_in_seed(self):
        a = build_random_interleaver(64, seed=123)
        b = build_random_interleaver(64, seed=123)
        c = build_random_interleaver(64, seed=124)
        assert np.array_equal(a.forward, b.forward)
        assert not np.array_equal(a.forward, c.forward)

    def test_invalid_length(self):
        with pytest.raises(ValueError):
            build_random_interleaver(0, seed=1)

    def test_fixed_point_count_statistics(self):
        # a uniform permutation has on average one fixed point
        k = 10_000
        draws = 10_000
        total = 0
        for seed in range(draws):
            perm = build_random_interleaver(k, seed=seed)
            total += int(np.count_nonzero(perm.forward == np.arange(k)))
        mean = total / draws
        assert abs(mean - 1.0) <= 0.2


class TestApply:
    def test_identity(self):
        perm = identity_interleaver(7)
        v = np.arange(7.0)
        assert np.array_equal(apply(perm, v), v)
        assert np.array_equal(apply_inverse(perm, v), v)

    def test_round_trip_all_kinds(self):
        rng = np.random.default_rng(5)
        cases = [build_umts_interleaver(40), build_umts_interleaver(990),
                 build_random_interleaver(17, seed=1), identity_interleaver(5)]
        for perm in cases:
            for _ in range(250):
                v = rng.normal(size=perm.k)
                assert np.array_equal(apply_inverse(perm, apply(perm, v)), v)
                assert np.array_equal(apply(perm, apply_inverse(perm, v)), v)

    def test_constant_vector_unchanged(self):
        perm = build_random_interleaver(33, seed=2)
        v = np.full(33, 4.25)
        assert np.array_equal(apply(perm, v), v)

    def test_length_mismatch_rejected(self):
        perm = identity_interleaver(4)
        with pytest.raises(ValueError):
            apply(perm, np.zeros(5))
        with pytest.raises(ValueError):
            apply_inverse(perm, np.zeros(3))
