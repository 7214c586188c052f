"""Classical entropies, guessing probability, Fano inversion.

Distributions are 1-D array-likes summing to one; joint distributions are
``|X| x |E|`` tables with the key value along axis 0 and the side symbol
along axis 1.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import InvalidArgument, InvalidProbability

TOL = 1e-9
#: Mass at or below this does not count towards the support (0-entropy).
SUPPORT_THRESHOLD = 1e-12


def distribution(p) -> np.ndarray:
    d = np.asarray(p, dtype=float).reshape(-1)
    if d.size == 0:
        raise InvalidProbability("distribution must be non-empty")
    if (d < -TOL).any() or (d > 1 + TOL).any():
        raise InvalidProbability("probabilities must lie in [0, 1]")
    if abs(d.sum() - 1.0) > TOL:
        raise InvalidProbability(f"probabilities sum to {d.sum():.12g}, not 1")
    return np.clip(d, 0.0, 1.0)


def joint_distribution(p) -> np.ndarray:
    j = np.asarray(p, dtype=float)
    if j.ndim != 2 or j.size == 0:
        raise InvalidProbability(f"joint table must be 2-D and non-empty, got shape {j.shape}")
    distribution(j.reshape(-1))
    return np.clip(j, 0.0, 1.0)


def _plogp(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def shannon_entropy(p) -> float:
    d = distribution(p)
    return float(np.clip(_plogp(d), 0.0, math.log2(d.size)))


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise InvalidProbability(f"p={p} outside [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * math.log2(p) - (1 - p) * math.log2(1 - p))


def min_entropy(p) -> float:
    return float(max(0.0, -math.log2(distribution(p).max())))


def zero_entropy(p) -> float:
    d = distribution(p)
    return math.log2(int(np.count_nonzero(d > SUPPORT_THRESHOLD)))


def mutual_information(joint) -> float:
    """I(X;E) of a joint table, in bits."""
    j = joint_distribution(joint)
    return max(0.0, _plogp(j.sum(1)) + _plogp(j.sum(0)) - _plogp(j.reshape(-1)))


def guessing_probability(joint) -> float:
    """Average success of the optimal guess of X after seeing E."""
    return float(joint_distribution(joint).max(axis=0).sum())


def cond_min_entropy(joint) -> float:
    return float(-math.log2(guessing_probability(joint)))


def _fano_rhs(p: float, m: int) -> float:
    return binary_entropy(p) + p * math.log2(m - 1)


def fano_invert(m: int, chi: float, tol: float = 1e-9) -> float:
    """Smallest error probability compatible with Fano's inequality.

    Finds the infimum of ``p`` in ``[0, 1 - 1/m]`` with
    ``log2(m) - chi <= H_b(p) + p log2(m - 1)``.
    """
    if m < 2 or chi < 0:
        raise InvalidArgument(f"need m >= 2 and chi >= 0, got m={m}, chi={chi}")
    target = math.log2(m) - chi
    if target <= 0:
        return 0.0
    if target >= math.log2(m):
        # the right side reaches log2(m) only at the endpoint, where it is flat
        return 1.0 - 1.0 / m
    lo, hi = 0.0, 1.0 - 1.0 / m
    # rhs(hi) == log2(m) >= target, so the root is bracketed
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _fano_rhs(mid, m) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def fano_lower_bound_diagnostic(n: int, m: int, chi: float) -> float:
    """``log2(1/n) * (log2(m) - chi - 1)``.

    Reported for completeness only; the value is negative whenever the
    second factor is positive and cannot bound a probability.
    """
    return math.log2(1.0 / n) * (math.log2(m) - chi - 1.0)


def helstrom_floor(m: int, eps2: float) -> float:
    """``1 - (1 + eps2 (m - 1)) / m``, clamped at zero."""
    return max(0.0, 1.0 - (1.0 + eps2 * (m - 1)) / m)


class SecurityClass(enum.Enum):
    ASYMMETRIC = "Asymmetric"
    SYMMETRIC = "Symmetric"
    NEITHER = "Neither"


def classify_security(hinf_x_given_u: float, hinf_y_given_u: float,
                      sup_h0_y_given_x: float, sup_h0_x_given_y: float,
                      log_x: float, log_y: float, c: float = 1.0) -> SecurityClass:
    """Classify one instance by the min-/0-entropy gap conditions.

    The asymptotic ``Omega(.)`` is replaced by the explicit factor ``c``;
    conditioning on Eve's instance ``u`` is left to the caller.
    """
    if hinf_y_given_u - sup_h0_y_given_x >= c * log_y:
        return SecurityClass.ASYMMETRIC
    gap = max(hinf_x_given_u, hinf_y_given_u) - sup_h0_y_given_x - sup_h0_x_given_y
    if gap >= c * max(log_x, log_y):
        return SecurityClass.SYMMETRIC
    return SecurityClass.NEITHER
