import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holevo_auth import gf2
from holevo_auth.errors import InvalidArgument, LengthMismatch
from holevo_auth.hashing import (PARITYCHECK, TOEPLITZ, ConcatenatedMAC, HashInstance, KeyedToeplitzMAC,
                                 collision_estimate, evaluate, parity_checks, parse, sample_invertible_batch,
                                 sample_invertible_gf2, sample_paritycheck, sample_toeplitz, serialize,
                                 tag_message, tags_for_keys, toeplitz_instance, toeplitz_matrix)


def exact_toeplitz_collision(n, d, x, y):
    """Oracle: collision fraction over every diagonal (offsets cancel)."""
    hits = 0
    for diag in itertools.product([0, 1], repeat=n + d - 1):
        t = toeplitz_matrix(diag, n, d)
        hits += np.array_equal(gf2.matvec(t, x), gf2.matvec(t, y))
    return hits / 2 ** (n + d - 1)


class TestToeplitz:
    def test_matrix_is_constant_on_diagonals(self):
        t = toeplitz_matrix(np.arange(6) % 2, 4, 3)
        for i in range(1, 3):
            for j in range(1, 4):
                assert t[i, j] == t[i - 1, j - 1]

    def test_n1_family_collides_half(self):
        assert exact_toeplitz_collision(1, 1, np.array([0], np.uint8), np.array([1], np.uint8)) == 0.5

    @pytest.mark.parametrize("n, d", [(3, 1), (3, 2), (4, 2), (4, 3)])
    def test_two_universal_exactly(self, n, d):
        for x, y in itertools.combinations(itertools.product([0, 1], repeat=n), 2):
            rate = exact_toeplitz_collision(n, d, np.array(x, np.uint8), np.array(y, np.uint8))
            assert rate == pytest.approx(2.0 ** -d)

    def test_sample_rejects_bad_dims(self):
        rng = np.random.default_rng(0)
        with pytest.raises(InvalidArgument):
            sample_toeplitz(4, 5, rng)
        with pytest.raises(InvalidArgument):
            sample_toeplitz(4, 0, rng)


class TestInvertible:
    def test_n1(self):
        L, LinvT = sample_invertible_gf2(1, np.random.default_rng(0))
        assert L.tolist() == [[1]] and LinvT.tolist() == [[1]]

    def test_inverse_pair(self):
        rng = np.random.default_rng(5)
        for n in (2, 5, 9):
            L, LinvT = sample_invertible_gf2(n, rng)
            assert np.array_equal(gf2.matmul(L, LinvT.T), np.eye(n, dtype=np.uint8))

    def test_uniform_over_gl3(self):
        # |GL(3, 2)| = 168, so each of the 168 matrices should appear about equally often.
        mats = sample_invertible_batch(3, 33_600, np.random.default_rng(7))
        codes = mats.reshape(len(mats), -1) @ (1 << np.arange(9))
        counts = np.bincount(codes, minlength=512)
        assert np.count_nonzero(counts) == 168
        seen = counts[counts > 0]
        assert abs(seen.mean() - 200) < 1e-9
        assert seen.min() > 120 and seen.max() < 290

    def test_invertible_fraction(self):
        total = sum(gf2.rank(np.array(b, np.uint8).reshape(3, 3)) == 3
                    for b in itertools.product([0, 1], repeat=9))
        assert total == 168

    def test_parity_checks_examples(self):
        p1, p2 = parity_checks(np.eye(2, dtype=np.uint8), np.eye(2, dtype=np.uint8))
        assert p1.tolist() == [[1, 0]] and p2.tolist() == [[0, 1]]
        L = np.array([[1, 1], [0, 1]], np.uint8)
        LinvT = gf2.inverse(L).T
        assert LinvT.tolist() == [[1, 0], [1, 1]]
        p1, p2 = parity_checks(L, LinvT)
        assert p1.tolist() == [[1, 0]] and p2.tolist() == [[0, 1]]

    def test_paritycheck_full_rank_is_injective(self):
        rate, _ = collision_estimate(PARITYCHECK, 6, 6, 2000, np.random.default_rng(1))
        assert rate == 0.0


class TestEvaluate:
    def test_zero_instance(self):
        h = HashInstance(TOEPLITZ, 4, 2, np.zeros((2, 4), np.uint8), np.zeros(2, np.uint8))
        for x in itertools.product([0, 1], repeat=4):
            assert evaluate(h, x).tolist() == [0, 0]

    def test_identity(self):
        h = HashInstance(PARITYCHECK, 4, 4, np.eye(4, dtype=np.uint8), np.zeros(4, np.uint8))
        assert evaluate(h, [1, 0, 1, 1]).tolist() == [1, 0, 1, 1]

    def test_length_mismatch(self):
        h = sample_toeplitz(4, 2, np.random.default_rng(0))
        with pytest.raises(LengthMismatch):
            evaluate(h, [1, 0, 1])

    def test_tag_message_concatenates(self):
        h = sample_toeplitz(6, 3, np.random.default_rng(2))
        assert np.array_equal(tag_message(h, [1, 0, 1, 1, 0, 0], []), evaluate(h, [1, 0, 1, 1, 0, 0]))
        assert np.array_equal(tag_message(h, [1, 0, 1], [1, 0, 0]), evaluate(h, [1, 0, 1, 1, 0, 0]))
        tags = {tuple(tag_message(h, [1, 1, 0], [0, 1, 1])) for _ in range(100)}
        assert len(tags) == 1
        with pytest.raises(LengthMismatch):
            tag_message(h, [1, 1], [0, 1, 1])


class TestSerialize:
    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1), st.booleans())
    def test_round_trip(self, n, d, seed, toeplitz):
        if d > n:
            n, d = d, n
        rng = np.random.default_rng(seed)
        h = sample_toeplitz(n, d, rng) if toeplitz else sample_paritycheck(n, d, rng)
        assert parse(serialize(h)) == h

    def test_rejects_garbage(self):
        with pytest.raises(InvalidArgument):
            parse("")
        with pytest.raises(InvalidArgument):
            parse("sponge n=4\n0\n0\n")


class TestCollisionEstimate:
    def test_d1_is_half(self):
        rate, se = collision_estimate(TOEPLITZ, 8, 1, 100_000, np.random.default_rng(3))
        assert abs(rate - 0.5) <= 3 * se

    def test_matches_exhaustive_family(self):
        rate, se = collision_estimate(TOEPLITZ, 4, 2, 50_000, np.random.default_rng(4),
                                      pair=([1, 0, 1, 0], [0, 1, 1, 0]))
        exact = exact_toeplitz_collision(4, 2, np.array([1, 0, 1, 0], np.uint8), np.array([0, 1, 1, 0], np.uint8))
        assert abs(rate - exact) <= 4 * se

    def test_paritycheck_bound(self):
        rate, se = collision_estimate(PARITYCHECK, 10, 4, 100_000, np.random.default_rng(6))
        assert rate <= 2 ** -4 + 4 * se

    def test_invalid(self):
        rng = np.random.default_rng(0)
        with pytest.raises(InvalidArgument):
            collision_estimate(TOEPLITZ, 4, 2, 0, rng)
        with pytest.raises(InvalidArgument):
            collision_estimate(TOEPLITZ, 4, 2, 10, rng, pair=([1, 0, 0, 0], [1, 0, 0, 0]))
        with pytest.raises(InvalidArgument):
            collision_estimate("sponge", 4, 2, 10, rng)


class TestMACs:
    def test_keyed_layout_matches_instance(self):
        mac = KeyedToeplitzMAC(5, 3)
        rng = np.random.default_rng(8)
        for _ in range(50):
            key = rng.integers(0, 2, mac.key_bits, dtype=np.uint8)
            msg = rng.integers(0, 2, 5, dtype=np.uint8)
            assert np.array_equal(mac.tag(key, msg), evaluate(mac.instance(key), msg))

    def test_keyed_substitution_is_two_universal(self):
        # For M != M' and any observed T, P[tag(M') = T' | tag(M) = T] = 2**-d over uniform keys.
        mac = KeyedToeplitzMAC(3, 2)
        keys = np.arange(1 << mac.key_bits, dtype=np.uint64)
        t_m = tags_for_keys(mac, keys, [1, 0, 1])
        t_mp = tags_for_keys(mac, keys, [0, 1, 1])
        for t in range(4):
            cond = t_mp[t_m == t]
            assert np.bincount(cond.astype(int), minlength=4).tolist() == [len(cond) // 4] * 4

    def test_for_key_length(self):
        mac = KeyedToeplitzMAC.for_key_length(16, 4)
        assert (mac.message_bits, mac.key_bits) == (9, 16)
        with pytest.raises(InvalidArgument):
            KeyedToeplitzMAC.for_key_length(6, 4)

    def test_concatenated_affine_form(self):
        h = sample_toeplitz(10, 3, np.random.default_rng(9))
        mac = ConcatenatedMAC(h, 6)
        rng = np.random.default_rng(10)
        for _ in range(30):
            key = rng.integers(0, 2, 6, dtype=np.uint8)
            msg = rng.integers(0, 2, 4, dtype=np.uint8)
            expected = gf2.bits_to_int(tag_message(h, key, msg))
            assert mac.tag_int(gf2.bits_to_int(key), gf2.bits_to_int(msg)) == expected
            assert tags_for_keys(mac, [gf2.bits_to_int(key)], msg)[0] == expected
