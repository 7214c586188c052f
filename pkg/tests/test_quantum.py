import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from holevo_auth.errors import DimensionMismatch, InvalidChannel, InvalidPrior, InvalidState
from holevo_auth.quantum import (KET0, KET1, KETPLUS, Ensemble, KrausChannel, apply_channel, density_matrix,
                                 frobenius_norm, helstrom_success, holevo_information, maximally_mixed, pure,
                                 random_channel, random_state, relative_entropy, trace_distance,
                                 von_neumann_entropy)

RHO0, RHO1, PLUS = pure(KET0), pure(KET1), pure(KETPLUS)


def scipy_entropy(rho):
    """Oracle: -tr(rho log2 rho) through scipy's matrix logarithm."""
    w = np.linalg.eigvalsh(rho)
    if w.min() < 1e-10:
        rho = rho + 1e-13 * np.eye(len(rho))
    return float(-np.trace(rho @ scipy.linalg.logm(rho)).real / math.log(2))


class TestDensityMatrix:
    def test_accepts_valid(self):
        assert density_matrix(np.eye(2) / 2).shape == (2, 2)

    @pytest.mark.parametrize("bad, word", [
        (np.ones((2, 3)) / 2, "square"),
        (np.eye(9) / 9, "dimension"),
        (np.array([[0.5, 1.0], [0.0, 0.5]]), "hermitian"),
        (np.eye(2), "trace"),
        (np.array([[1.5, 0], [0, -0.5]]), "positivity"),
    ])
    def test_names_failed_invariant(self, bad, word):
        with pytest.raises(InvalidState, match=word):
            density_matrix(bad)

    def test_result_is_read_only(self):
        with pytest.raises(ValueError):
            density_matrix(np.eye(2) / 2)[0, 0] = 1


class TestFrobenius:
    def test_examples(self):
        assert frobenius_norm(np.eye(2)) == pytest.approx(math.sqrt(2))
        assert frobenius_norm(np.zeros((3, 3))) == 0.0
        assert frobenius_norm([[1, 2], [3, 4]]) == pytest.approx(math.sqrt(30))

    def test_trace_identity(self):
        a = np.random.default_rng(0).normal(size=(3, 3)) + 1j
        assert frobenius_norm(a) == pytest.approx(math.sqrt(np.trace(a.conj().T @ a).real), rel=1e-12)


class TestEntropy:
    def test_examples(self):
        assert von_neumann_entropy(np.diag([0.5, 0.5])) == pytest.approx(1.0)
        assert von_neumann_entropy(PLUS) == pytest.approx(0.0, abs=1e-12)
        assert von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(0.811278, abs=1e-6)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 4), st.integers(0, 2**32 - 1))
    def test_matches_scipy_logm(self, d, seed):
        rho = random_state(d, np.random.default_rng(seed))
        assert von_neumann_entropy(rho) == pytest.approx(scipy_entropy(rho), abs=1e-8)
        assert 0.0 <= von_neumann_entropy(rho) <= math.log2(d)


class TestHolevo:
    def test_examples(self):
        assert holevo_information(Ensemble([0.5, 0.5], [RHO0, RHO1])) == pytest.approx(1.0)
        assert holevo_information(Ensemble([1.0], [PLUS])) == pytest.approx(0.0, abs=1e-12)
        lam = np.array([(1 + 1 / math.sqrt(2)) / 2, (1 - 1 / math.sqrt(2)) / 2])
        expected = float(-(lam * np.log2(lam)).sum())
        chi = holevo_information(Ensemble([0.5, 0.5], [RHO0, PLUS]))
        assert chi == pytest.approx(expected, abs=1e-12)
        assert chi == pytest.approx(0.60088, abs=1e-5)

    def test_mixed_dimensions(self):
        with pytest.raises(DimensionMismatch):
            Ensemble([0.5, 0.5], [RHO0, np.eye(3) / 3])

    def test_bad_prior(self):
        with pytest.raises(InvalidPrior):
            Ensemble([0.5, 0.6], [RHO0, RHO1])


class TestDistances:
    def test_trace_distance_examples(self):
        assert trace_distance(PLUS, PLUS) == pytest.approx(0.0, abs=1e-12)
        assert trace_distance(RHO0, RHO1) == pytest.approx(1.0)
        assert trace_distance(RHO0, PLUS) == pytest.approx(1 / math.sqrt(2))

    def test_trace_distance_dims(self):
        with pytest.raises(DimensionMismatch):
            trace_distance(RHO0, np.eye(3) / 3)

    def test_helstrom_examples(self):
        assert helstrom_success(0.5, PLUS, 0.5, PLUS) == pytest.approx(0.5)
        assert helstrom_success(0.5, RHO0, 0.5, RHO1) == pytest.approx(1.0)
        assert helstrom_success(0.5, RHO0, 0.5, PLUS) == pytest.approx((1 + 1 / math.sqrt(2)) / 2, abs=1e-12)

    def test_helstrom_prior_floor(self):
        assert helstrom_success(0.9, PLUS, 0.1, PLUS) == pytest.approx(0.9)
        with pytest.raises(InvalidPrior):
            helstrom_success(0.5, RHO0, 0.6, RHO1)

    def test_relative_entropy_examples(self):
        assert relative_entropy(PLUS, PLUS) == pytest.approx(0.0, abs=1e-9)
        assert relative_entropy(RHO0, RHO1) == math.inf
        expected = 0.5 * math.log2(0.5 / 0.75) + 0.5 * math.log2(0.5 / 0.25)
        assert relative_entropy(np.diag([0.5, 0.5]), np.diag([0.75, 0.25])) == pytest.approx(expected)
        assert expected == pytest.approx(0.20752, abs=1e-5)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 3), st.integers(0, 2**32 - 1))
    def test_relative_entropy_matches_logm(self, d, seed):
        rng = np.random.default_rng(seed)
        rho, sigma = random_state(d, rng), random_state(d, rng)
        oracle = np.trace(rho @ (scipy.linalg.logm(rho) - scipy.linalg.logm(sigma))).real / math.log(2)
        assert relative_entropy(rho, sigma) == pytest.approx(oracle, abs=1e-7)


class TestChannels:
    def test_identity(self):
        rho = random_state(3, np.random.default_rng(1))
        assert np.allclose(apply_channel(KrausChannel([np.eye(3)]), rho), rho)

    def test_full_depolarisation(self):
        ks = [np.outer(np.eye(2)[i], np.eye(2)[j]) / math.sqrt(2) for i in range(2) for j in range(2)]
        out = apply_channel(KrausChannel(ks), PLUS)
        assert np.allclose(out, maximally_mixed(2))

    def test_bit_flip(self):
        x = np.array([[0, 1], [1, 0]])
        ch = KrausChannel([math.sqrt(0.7) * np.eye(2), math.sqrt(0.3) * x])
        assert np.allclose(apply_channel(ch, RHO0), np.diag([0.7, 0.3]))

    def test_incomplete_kraus(self):
        with pytest.raises(InvalidChannel, match="completeness"):
            KrausChannel([0.5 * np.eye(2)])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            apply_channel(KrausChannel([np.eye(3)]), RHO0)

    def test_random_channel_is_cptp(self):
        ch = random_channel(3, np.random.default_rng(2), n_kraus=3)
        assert np.allclose(sum(k.conj().T @ k for k in ch.operators), np.eye(3))
