"""Eve: optimal guessing from classical or quantum side information, and
optimal one-shot substitution forgery against a hash-based MAC.

Two forgery engines are provided. :func:`forgery_search` works from an
arbitrary joint distribution over (key, side symbol) by enumerating the key
space. :class:`AffineKnowledge` and :func:`linear_forgery` cover the case
the protocol simulator produces, where Eve's posterior is uniform on an
affine subspace of keys; there the optimum is a rank computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import gf2
from .entropy import joint_distribution
from .errors import DegenerateEnsemble, EmptyMessageSpace, InfeasibleScale, InvalidPrior, LengthMismatch
from .hashing import ConcatenatedMAC, HashInstance, KeyedToeplitzMAC, tags_for_keys
from .quantum import TOL, density_matrix, helstrom_success

MAX_SEARCH_KEYS = 1 << 20
MAX_EXACT_KEYS = 1 << 16
PRUNE = 1e-15


def optimal_guess_classical(joint) -> tuple[np.ndarray, float]:
    """Per-symbol MAP guess (smallest key index on ties) and its success."""
    j = joint_distribution(joint)
    strategy = j.argmax(axis=0)
    return strategy, float(j.max(axis=0).sum())


@dataclass(frozen=True)
class QuantumSideInfo:
    """Classical-quantum correlation: components ``(prob, label, state)``."""

    probs: np.ndarray
    labels: tuple
    states: np.ndarray

    def __init__(self, probs, labels, states):
        p = np.asarray(probs, dtype=float).reshape(-1)
        if len(labels) != p.size or len(states) != p.size:
            raise InvalidPrior("probs, labels and states must have equal length")
        if abs(p.sum() - 1.0) > TOL or (p < -TOL).any():
            raise InvalidPrior(f"probabilities sum to {p.sum():.12g}, not 1")
        rhos = np.stack([density_matrix(s) for s in states])
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "states", rhos)

    def by_label(self) -> tuple[list, np.ndarray, np.ndarray]:
        """Label priors and conditional states, labels in first-seen order."""
        order = list(dict.fromkeys(self.labels))
        priors = np.zeros(len(order))
        weighted = np.zeros((len(order),) + self.states.shape[1:], dtype=complex)
        for p, lab, rho in zip(self.probs, self.labels, self.states):
            k = order.index(lab)
            priors[k] += p
            weighted[k] += p * rho
        cond = np.array([w / p if p > 0 else w for w, p in zip(weighted, priors)])
        return order, priors, cond


def _inv_sqrt_on_support(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    keep = w > 1e-12
    if not keep.any():
        raise DegenerateEnsemble("average state is numerically zero")
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / np.sqrt(w[keep])
    return (v * inv) @ v.conj().T


def pgm_success(priors, states) -> float:
    """Success probability of the pretty-good (square-root) measurement."""
    priors = np.asarray(priors, dtype=float)
    states = np.asarray(states, dtype=complex)
    avg = np.einsum("i,ijk->jk", priors, states)
    s = _inv_sqrt_on_support(avg)
    total = 0.0
    for p, rho in zip(priors, states):
        mu = s @ (p * rho) @ s
        total += p * np.real(np.trace(rho @ mu))
    return float(min(1.0, total))


def guess_quantum(side: QuantumSideInfo) -> tuple[float, float | None]:
    """``(pgm_success, helstrom_success_or_None)`` for guessing the label.

    The pretty-good measurement is a lower bound on the optimal success; the
    Helstrom value is exact and only available for two labels.
    """
    labels, priors, cond = side.by_label()
    p_lower = pgm_success(priors, cond)
    if len(labels) == 2:
        return p_lower, helstrom_success(priors[0], cond[0], priors[1], cond[1])
    return p_lower, None


@dataclass(frozen=True)
class ForgeryOutcome:
    message: np.ndarray
    tag: np.ndarray
    accepted: bool | None
    trials: int
    success_rate: float


def _as_scheme(scheme, key_bits: int):
    if isinstance(scheme, HashInstance):
        return ConcatenatedMAC(scheme, key_bits)
    return scheme


def forgery_search(joint, scheme, genuine, e: int, rng: np.random.Generator | None = None,
                   trials: int = 10_000, true_key=None) -> ForgeryOutcome:
    """Eve's best substitution ``(M', T')`` given side symbol ``e`` and ``(M, T)``.

    ``joint[x, e]`` is the prior over integer keys ``x`` (MSB-first bits) and
    side symbols. ``scheme`` is a MAC scheme or a public :class:`HashInstance`
    (then the tag is ``evaluate(h, key || message)``). The success rate is the
    exact posterior acceptance mass when the key space has at most
    ``2**16`` elements and a Monte Carlo estimate over ``trials`` posterior
    draws above that.
    """
    j = joint_distribution(joint)
    n_keys = j.shape[0]
    key_bits = n_keys.bit_length() - 1
    if 1 << key_bits != n_keys:
        raise LengthMismatch("key alphabet size must be a power of two")
    if n_keys > MAX_SEARCH_KEYS:
        raise InfeasibleScale(f"{n_keys} keys exceeds the search cap {MAX_SEARCH_KEYS}")
    scheme = _as_scheme(scheme, key_bits)
    if scheme.key_bits != key_bits:
        raise LengthMismatch(f"scheme expects {scheme.key_bits}-bit keys, prior has {key_bits}")
    if scheme.message_bits == 0:
        raise EmptyMessageSpace("no message M' != M exists")
    message, tag = genuine
    message = gf2.as_bits(message, scheme.message_bits)
    m_int = gf2.bits_to_int(message)
    t_int = gf2.bits_to_int(gf2.as_bits(tag, scheme.tag_bits))

    keys = np.arange(n_keys, dtype=np.uint64)
    post = j[:, e] * (tags_for_keys(scheme, keys, message) == t_int)
    if post.sum() <= 0:
        raise InvalidPrior("observed (e, M, T) has zero probability under the prior")
    post = post / post.sum()
    live = post > PRUNE
    keys, post = keys[live], post[live]

    best = (-1.0, 0, 0)
    for mp in range(1 << scheme.message_bits):
        if mp == m_int:
            continue
        tags = tags_for_keys(scheme, keys, gf2.int_to_bits(mp, scheme.message_bits))
        mass = np.bincount(tags.astype(np.int64), weights=post, minlength=1 << scheme.tag_bits)
        tp = int(mass.argmax())
        if mass[tp] > best[0] + 1e-15:
            best = (float(mass[tp]), mp, tp)
    rate, mp, tp = best
    used = 1
    if n_keys > MAX_EXACT_KEYS:
        rng = np.random.default_rng() if rng is None else rng
        draws = rng.choice(keys, size=trials, p=post)
        hits = tags_for_keys(scheme, draws, gf2.int_to_bits(mp, scheme.message_bits)) == tp
        rate, used = float(hits.mean()), trials
    m_bits = gf2.int_to_bits(mp, scheme.message_bits)
    t_bits = gf2.int_to_bits(tp, scheme.tag_bits)
    accepted = None
    if true_key is not None:
        accepted = bool(np.array_equal(scheme.tag(gf2.as_bits(true_key, key_bits), m_bits), t_bits))
    return ForgeryOutcome(m_bits, t_bits, accepted, used, min(1.0, rate))


class AffineKnowledge:
    """Eve's posterior when it is uniform on ``{x0 ^ span(basis)}``."""

    def __init__(self, nbits: int, rows=(), rhs=()):
        solved = gf2.solve_affine(list(rows), list(rhs), nbits)
        if solved is None:
            raise InvalidPrior("constraints are inconsistent")
        self.nbits = nbits
        self.rows = tuple(rows)
        self.rhs = tuple(int(b) & 1 for b in rhs)
        self.x0, self.basis = solved

    def constrain(self, rows, rhs) -> "AffineKnowledge":
        return AffineKnowledge(self.nbits, self.rows + tuple(rows), self.rhs + tuple(rhs))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def guess(self) -> int:
        return self.x0

    def guess_probability(self) -> float:
        return 2.0 ** -self.dimension

    def image_rank(self, rows) -> int:
        """Dimension of the image of the posterior under the linear map ``rows``."""
        images = []
        for w in self.basis:
            v = 0
            for r in rows:
                v = (v << 1) | gf2.parity(r & w)
            images.append(v)
        return gf2.rank_int(images)


@lru_cache(maxsize=8)
def _message_table(m: int) -> np.ndarray:
    return ((np.arange(1 << m)[:, None] >> np.arange(m - 1, -1, -1)) & 1).astype(np.uint8)


def _basis_images(scheme, basis: list[int], messages: np.ndarray) -> np.ndarray:
    """Bits ``(P, d, w)``: linear part of the tag of each message on each basis vector."""
    w = len(basis)
    d = scheme.tag_bits
    if w == 0:
        return np.zeros((len(messages), d, 0), dtype=np.uint8)
    vecs = np.array([gf2.int_to_bits(b, scheme.key_bits) for b in basis], dtype=np.uint8)
    if isinstance(scheme, KeyedToeplitzMAC):
        m = scheme.message_bits
        ndiag = m + d - 1
        idx = np.arange(d)[:, None] - np.arange(m)[None, :] + m - 1
        toep = vecs[:, :ndiag][:, idx].astype(np.float32)        # (w, d, m)
        # float32 matmul is exact here: every sum is at most m < 2**24
        lin = (messages.astype(np.float32) @ toep.transpose(2, 1, 0).reshape(m, d * w))
        lin = lin.astype(np.int64).reshape(len(messages), d, w) & 1
        return (lin ^ vecs[:, ndiag:].T[None, :, :]).astype(np.uint8)
    out = np.empty((len(messages), d, w), dtype=np.uint8)
    for p, msg in enumerate(messages):
        rows, _ = scheme.affine_form(msg)
        for k, b in enumerate(basis):
            for i, r in enumerate(rows):
                out[p, i, k] = gf2.parity(r & b)
    return out


def forgery_ranks(scheme, knowledge: AffineKnowledge) -> np.ndarray:
    """Rank of the tag map restricted to the posterior, for every message."""
    msgs = _message_table(scheme.message_bits)
    bits = _basis_images(scheme, knowledge.basis, msgs)
    w = bits.shape[2]
    if w == 0:
        return np.zeros(len(msgs), dtype=np.int64)
    weights = (np.uint64(1) << np.arange(w, dtype=np.uint64))
    packed = (bits.astype(np.uint64) * weights).sum(axis=2, dtype=np.uint64)
    return gf2.batch_rank(packed, w)


def _tag_constraints(scheme, m_int: int, t_int: int) -> tuple[list[int], list[int]]:
    if hasattr(scheme, "rows_for"):
        rows, const = list(scheme.rows_for(m_int)), 0
    else:
        rows, const = scheme.affine_form(gf2.int_to_bits(m_int, scheme.message_bits))
    t_int ^= const
    d = scheme.tag_bits
    return rows, [(t_int >> (d - 1 - i)) & 1 for i in range(d)]


def observe_tag(scheme, knowledge: AffineKnowledge, message, tag) -> AffineKnowledge:
    """Condition Eve's affine posterior on a genuine ``(M, T)``."""
    m_int = gf2.bits_to_int(gf2.as_bits(message, scheme.message_bits))
    t_int = gf2.bits_to_int(gf2.as_bits(tag, scheme.tag_bits))
    return knowledge.constrain(*_tag_constraints(scheme, m_int, t_int))


def forge_int(scheme, knowledge: AffineKnowledge, m_int: int, t_int: int,
              cache: dict | None = None) -> tuple[AffineKnowledge, int, int, float]:
    """Integer-valued core of :func:`linear_forgery`.

    Returns ``(posterior_after_tag, M', T', success_probability)``. The
    choice of ``M'`` and its rank depend only on the constraint rows, so
    ``cache`` maps those rows to ``(M', rank)``.
    """
    if scheme.message_bits == 0:
        raise EmptyMessageSpace("no message M' != M exists")
    after = knowledge.constrain(*_tag_constraints(scheme, m_int, t_int))
    hit = None if cache is None else cache.get(after.rows)
    if hit is None:
        ranks = forgery_ranks(scheme, after)
        ranks[m_int] = np.iinfo(np.int64).max
        mp = int(ranks.argmin())
        hit = (mp, int(ranks[mp]))
        if cache is not None:
            cache[after.rows] = hit
    mp, rk = hit
    return after, mp, scheme.tag_int(after.x0, mp), 2.0 ** -rk


def linear_forgery(scheme, knowledge: AffineKnowledge, message, tag,
                   cache: dict | None = None) -> tuple[np.ndarray, np.ndarray, float]:
    """Optimal ``(M', T')`` when the key posterior is affine-uniform.

    ``knowledge`` must describe Eve's view *before* the genuine tag; the tag
    constraints are added here. Among messages of minimal image rank the
    smallest is chosen, and ``T'`` is its tag under any consistent key.
    Returns ``(M', T', success_probability)``.
    """
    if scheme.message_bits == 0:
        raise EmptyMessageSpace("no message M' != M exists")
    m_int = gf2.bits_to_int(gf2.as_bits(message, scheme.message_bits))
    t_int = gf2.bits_to_int(gf2.as_bits(tag, scheme.tag_bits))
    _, mp, tp, prob = forge_int(scheme, knowledge, m_int, t_int, cache)
    return (gf2.int_to_bits(mp, scheme.message_bits), gf2.int_to_bits(tp, scheme.tag_bits), prob)


ATTACK_POLICIES = ("replay", "random_tag", "optimal")


def false_acceptance_rate(handle: Callable[[np.random.Generator, str], bool], policy: str,
                          trials: int, rng: np.random.Generator) -> tuple[float, float]:
    """Run ``trials`` independent protocol instances under ``policy``.

    ``handle(rng, policy)`` runs one instance and returns whether the verifier
    accepted Eve's substituted pair; a replay of the genuine pair never
    counts.
    """
    if policy not in ATTACK_POLICIES:
        raise ValueError(f"unknown attack policy {policy!r}")
    seeds = rng.integers(0, 2**63, size=trials)
    hits = 0
    for s in seeds:
        if policy != "replay" and handle(np.random.default_rng(int(s)), policy):
            hits += 1
    rate = hits / trials
    return rate, math.sqrt(rate * (1 - rate) / trials)
