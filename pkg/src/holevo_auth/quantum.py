"""Small-dimension density matrices, channels and entropic functionals.

All entropies are in bits. States are plain complex numpy arrays that have
passed :func:`density_matrix`; ensembles and channels are light frozen
containers that validate on construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidChannel, InvalidPrior, InvalidState

#: Library-wide absolute tolerance for state, ensemble and channel validity.
TOL = 1e-9
#: Eigenvalues at or below this are treated as zero inside ``x log x``.
ZERO_EIG = 1e-12
MAX_DIM = 8


def density_matrix(a) -> np.ndarray:
    """Validate ``a`` as a density matrix and return it as a complex array.

    Raises :class:`InvalidState` naming the first violated invariant
    (square, dimension, hermitian, trace, positivity).
    """
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InvalidState(f"square: expected a d x d matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise InvalidState(f"dimension: d={m.shape[0]} exceeds {MAX_DIM}")
    if np.max(np.abs(m - m.conj().T)) > TOL:
        raise InvalidState("hermitian: matrix differs from its conjugate transpose")
    if abs(np.trace(m) - 1.0) > TOL:
        raise InvalidState(f"trace: trace is {np.trace(m).real:.12g}, not 1")
    if np.linalg.eigvalsh(m).min() < -TOL:
        raise InvalidState("positivity: negative eigenvalue below -1e-9")
    m.setflags(write=False)
    return m


def pure(ket) -> np.ndarray:
    """Density matrix of a (not necessarily normalised) state vector."""
    v = np.asarray(ket, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    return density_matrix(np.outer(v, v.conj()))


def maximally_mixed(d: int) -> np.ndarray:
    return density_matrix(np.eye(d) / d)


KET0 = np.array([1.0, 0.0])
KET1 = np.array([0.0, 1.0])
KETPLUS = np.array([1.0, 1.0]) / np.sqrt(2)


@dataclass(frozen=True)
class Ensemble:
    """Probability-weighted list of equal-dimension density matrices."""

    probs: np.ndarray
    states: np.ndarray

    def __init__(self, probs, states):
        p = np.asarray(probs, dtype=float).reshape(-1)
        if p.size == 0:
            raise InvalidState("ensemble needs at least one component")
        if len(states) != p.size:
            raise InvalidState("one state per probability required")
        dims = {np.shape(s) for s in states}
        if len(dims) != 1:
            raise DimensionMismatch(f"ensemble states have mixed shapes {sorted(dims)}")
        if (p < -TOL).any() or (p > 1 + TOL).any():
            raise InvalidPrior("probabilities must lie in [0, 1]")
        if abs(p.sum() - 1.0) > TOL:
            raise InvalidPrior(f"probabilities sum to {p.sum():.12g}, not 1")
        rhos = np.stack([density_matrix(s) for s in states])
        rhos.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "states", rhos)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def average(self) -> np.ndarray:
        return np.einsum("i,ijk->jk", self.probs, self.states)


@dataclass(frozen=True)
class KrausChannel:
    """CPTP map given by Kraus operators of shape ``(d_out, d_in)``."""

    operators: np.ndarray

    def __init__(self, operators):
        ks = np.array([np.asarray(k, dtype=complex) for k in operators])
        if ks.ndim != 3 or ks.shape[0] == 0:
            raise InvalidChannel("expected a non-empty list of equal-shape matrices")
        d_in = ks.shape[2]
        completeness = np.einsum("kji,kjl->il", ks.conj(), ks)
        if np.max(np.abs(completeness - np.eye(d_in))) > TOL:
            raise InvalidChannel("completeness: sum of K^dagger K is not the identity")
        ks.setflags(write=False)
        object.__setattr__(self, "operators", ks)

    @property
    def d_in(self) -> int:
        return self.operators.shape[2]

    @property
    def d_out(self) -> int:
        return self.operators.shape[1]


def _spectrum(rho: np.ndarray) -> np.ndarray:
    try:
        w = np.linalg.eigvalsh(rho)
    except np.linalg.LinAlgError as exc:
        raise InvalidState(f"eigendecomposition failed: {exc}") from exc
    if w.min() < -TOL:
        raise InvalidState("positivity: negative eigenvalue below -1e-9")
    return np.clip(w, 0.0, None)


def _entropy_of_spectrum(w: np.ndarray) -> float:
    w = w[w > ZERO_EIG]
    return float(-np.sum(w * np.log2(w)))


def frobenius_norm(m) -> float:
    a = np.asarray(m, dtype=complex)
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))


def von_neumann_entropy(rho) -> float:
    rho = density_matrix(rho)
    s = _entropy_of_spectrum(_spectrum(rho))
    return float(np.clip(s, 0.0, np.log2(rho.shape[0])))


def holevo_information(e: Ensemble) -> float:
    """Holevo quantity ``S(sum p_i rho_i) - sum p_i S(rho_i)`` in bits."""
    avg = _entropy_of_spectrum(_spectrum(e.average()))
    parts = sum(p * _entropy_of_spectrum(_spectrum(s)) for p, s in zip(e.probs, e.states))
    return float(np.clip(avg - parts, 0.0, np.log2(e.dim)))


def _check_dims(*ms):
    shapes = {np.shape(m) for m in ms}
    if len(shapes) != 1:
        raise DimensionMismatch(f"incompatible shapes {sorted(shapes)}")


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(np.asarray(a, dtype=complex)))))


def trace_distance(rho, sigma) -> float:
    _check_dims(rho, sigma)
    rho, sigma = density_matrix(rho), density_matrix(sigma)
    return float(np.clip(0.5 * trace_norm(rho - sigma), 0.0, 1.0))


def helstrom_success(p0: float, rho0, p1: float, rho1) -> float:
    """Optimal probability of identifying which of two states was sent."""
    _check_dims(rho0, rho1)
    if min(p0, p1) < -TOL or abs(p0 + p1 - 1.0) > TOL:
        raise InvalidPrior(f"priors {p0}, {p1} do not form a distribution")
    rho0, rho1 = density_matrix(rho0), density_matrix(rho1)
    value = 0.5 * (1.0 + trace_norm(p0 * rho0 - p1 * rho1))
    return float(min(1.0, value))


def apply_channel(ch: KrausChannel, rho) -> np.ndarray:
    rho = density_matrix(rho)
    if rho.shape[0] != ch.d_in:
        raise DimensionMismatch(f"channel expects d={ch.d_in}, state has d={rho.shape[0]}")
    out = np.einsum("kij,jl,kml->im", ch.operators, rho, ch.operators.conj())
    out = 0.5 * (out + out.conj().T)
    return density_matrix(out)


def relative_entropy(rho, sigma) -> float:
    """Quantum relative entropy ``D(rho || sigma)`` in bits.

    Returns ``inf`` when ``rho`` has weight above ``TOL`` outside the
    support of ``sigma``.
    """
    _check_dims(rho, sigma)
    rho, sigma = density_matrix(rho), density_matrix(sigma)
    ws, vs = np.linalg.eigh(sigma)
    overlap = np.real(np.einsum("ji,jk,ki->i", vs.conj(), rho, vs))
    kernel = ws <= ZERO_EIG
    if np.any(overlap[kernel] > TOL):
        return float("inf")
    log_sigma_diag = np.zeros_like(ws)
    log_sigma_diag[~kernel] = np.log2(ws[~kernel])
    cross = float(np.sum(overlap * log_sigma_diag))
    neg_s_rho = -_entropy_of_spectrum(_spectrum(rho))
    return max(0.0, neg_s_rho - cross)


def random_state(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix from the induced (Ginibre) measure."""
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    m = g @ g.conj().T
    return density_matrix(m / np.trace(m).real)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_channel(d_in: int, rng: np.random.Generator, d_out: int | None = None,
                   n_kraus: int = 2) -> KrausChannel:
    """Channel whose Kraus operators are the blocks of a random isometry."""
    d_out = d_in if d_out is None else d_out
    z = rng.normal(size=(d_out * n_kraus, d_in)) + 1j * rng.normal(size=(d_out * n_kraus, d_in))
    v, _ = np.linalg.qr(z)
    return KrausChannel([v[i * d_out:(i + 1) * d_out] for i in range(n_kraus)])
