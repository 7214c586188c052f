"""Verification harness: named checks of the analytic bounds.

Every check returns :class:`~holevo_auth.verdict.BoundCheck` rows. Checks
are either exact (tolerance only) or Monte Carlo (``slack_sigmas`` standard
errors); no row mixes the two. Instance builders are deterministic given
their arguments and generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .adversary import AffineKnowledge, QuantumSideInfo, forge_int, guess_quantum, optimal_guess_classical
from .entropy import fano_invert, helstrom_floor, mutual_information, shannon_entropy
from .errors import HypothesisViolated
from .hashing import KeyedToeplitzMAC, collision_estimate
from .protocol import (FEASIBLE, INFEASIBLE_FORGE_FLOOR, ProtocolConfig, erasure_holevo, erasure_joint,
                       run_protocol)
from .quantum import (KET0, KETPLUS, Ensemble, KrausChannel, apply_channel, holevo_information, pure,
                      random_channel, random_state, relative_entropy, trace_distance)
from .verdict import EXACT, LOWER, TWO_SIDED, UPPER, BoundCheck, verdict_csv

EXACT_TOL = 1e-9
DPI_TOL = 1e-7


# --------------------------------------------------------------------------
# guessing chain

@dataclass(frozen=True)
class GuessInstance:
    """Uniform ``n``-bit key, erasure wiretap ``q``, keyed MAC with ``D``-bit tags."""

    n: int
    q: float
    tag_bits: int
    entropy_H: float
    chi: float
    chi_joint: float
    p_guess: float
    p_forge: float

    @property
    def label(self) -> str:
        return f"n={self.n},q={self.q:g},D={self.tag_bits}"


def exact_forgery_probability(n: int, q: float, tag_bits: int) -> float:
    """Optimal one-shot substitution success, averaged over masks and messages.

    Eve's posterior is affine for every erasure pattern, so the optimum for
    a given (mask, M) is ``2**-rank`` and independent of the key values.
    """
    scheme = KeyedToeplitzMAC.for_key_length(n, tag_bits)
    cache: dict = {}
    total = 0.0
    for mask in range(1 << n):
        rows = [1 << b for b in range(n) if (mask >> b) & 1]
        eve = AffineKnowledge(n, rows, [0] * len(rows))
        w = q ** len(rows) * (1 - q) ** (n - len(rows))
        if w == 0:
            continue
        acc = 0.0
        for m_int in range(1 << scheme.message_bits):
            acc += forge_int(scheme, eve, m_int, 0, cache)[3]
        total += w * acc / (1 << scheme.message_bits)
    return total


def guess_instance(n: int, q: float, tag_bits: int = 2) -> GuessInstance:
    """Exact H, chi, p_guess (brute force over the joint table) and p_forge."""
    joint = erasure_joint(n, q)
    _, p_guess = optimal_guess_classical(joint)
    return GuessInstance(n, q, tag_bits, shannon_entropy(joint.sum(axis=1)), erasure_holevo(n, q),
                         mutual_information(joint), p_guess, exact_forgery_probability(n, q, tag_bits))


def check_lemma1(inst: GuessInstance, delta: float | None = None) -> tuple[BoundCheck, BoundCheck]:
    """``p_forge <= p_guess`` and ``p_guess <= 2^-(H - delta)`` (exact)."""
    delta = inst.chi if delta is None else delta
    if delta < inst.chi - EXACT_TOL:
        raise HypothesisViolated(f"delta={delta} below chi={inst.chi}")
    bound = min(1.0, 2.0 ** -(inst.entropy_H - delta))
    return (BoundCheck(f"lemma1 p_forge <= p_guess [{inst.label}]", inst.p_guess, inst.p_forge,
                       kind=EXACT, tol=EXACT_TOL),
            BoundCheck(f"lemma1 p_guess <= 2^-(H-delta) [{inst.label}]", bound, inst.p_guess,
                       kind=EXACT, tol=EXACT_TOL))


def lemma1_grid(ns=range(4, 9), qs=tuple(np.round(np.arange(0, 1, 0.1), 10)), tag_bits: int = 2):
    return [guess_instance(n, float(q), tag_bits) for n in ns for q in qs]


# --------------------------------------------------------------------------
# Holevo gap

def check_theorem2(delta: float, p_forge: float, stderr: float, label: str = "",
                   floor: float = INFEASIBLE_FORGE_FLOOR) -> tuple[BoundCheck, BoundCheck]:
    """Upper branch ``p_forge <= 2^-delta`` and lower branch ``p_forge >= floor``.

    Only the branch selected by the sign of ``delta`` is live; the other row
    is vacuous.
    """
    tag = f" [{label}]" if label else ""
    up = BoundCheck(f"theorem2 delta>0: p_forge <= 2^-delta{tag}", 2.0 ** -max(delta, 0.0), p_forge,
                    stderr, kind=UPPER, vacuous=delta <= 0)
    low = BoundCheck(f"theorem2 delta<=0: p_forge >= floor{tag}", floor, p_forge, stderr,
                     kind=LOWER, vacuous=delta > 0)
    return up, low


def check_forgery_family(tag_bits: int, p_forge: float, trials: int, label: str = "") -> BoundCheck:
    """Forgery rate agrees with ``2^-D`` within the binomial slack."""
    b = 2.0 ** -tag_bits
    tag = f" [{label}]" if label else ""
    return BoundCheck(f"forgery rate = 2^-D{tag}", b, p_forge, math.sqrt(b * (1 - b) / trials),
                      kind=TWO_SIDED)


# --------------------------------------------------------------------------
# corollaries

def check_corollary1(chi_after: float, entropy_h: float, k: int, p_auth: float, stderr: float,
                     label: str = "") -> BoundCheck:
    if chi_after > entropy_h - k + EXACT_TOL:
        raise HypothesisViolated(f"chi_EC={chi_after} exceeds H - k = {entropy_h - k}")
    tag = f" [{label}]" if label else ""
    return BoundCheck(f"corollary1 p_auth <= 2^-k{tag}", 2.0 ** -k, p_auth, stderr, vacuous=k == 0)


def check_corollary2(chi: float, entropy_h: float, k: int, l: int, combined: float, stderr: float,
                     label: str = "") -> BoundCheck:
    if chi > entropy_h - k - l + EXACT_TOL:
        raise HypothesisViolated(f"chi={chi} exceeds H - k - l = {entropy_h - k - l}")
    tag = f" [{label}]" if label else ""
    return BoundCheck(f"corollary2 combined <= 2^-k + 2^-l{tag}", 2.0 ** -k + 2.0 ** -l, combined, stderr)


# --------------------------------------------------------------------------
# transcript leakage (2-bit toy)

def _toy_states() -> list[np.ndarray]:
    """Eve's qubit for x in {00, 01, 10, 11}: |0> if the first bit is 0, else |+>."""
    return [pure(KET0), pure(KET0), pure(KETPLUS), pure(KETPLUS)]


def toy_transcripts() -> list[tuple[int, ...]]:
    """All 16 Boolean functions of a 2-bit key, as value tables."""
    return [tuple((f >> (3 - x)) & 1 for x in range(4)) for f in range(16)]


def toy_holevo(transcript: tuple[int, ...] | None) -> float:
    """Holevo information of Eve's toy ensemble, optionally with the transcript register."""
    states = _toy_states()
    if transcript is not None:
        reg = [np.diag([1.0 - c, float(c)]) for c in transcript]
        states = [np.kron(s, r) for s, r in zip(states, reg)]
    return holevo_information(Ensemble([0.25] * 4, states))


def check_lemma2(transcript: tuple[int, ...] | None) -> BoundCheck:
    """Exact ``chi_EC <= chi_E + t`` on the toy; ``None`` means an empty transcript."""
    chi_e = toy_holevo(None)
    chi_ec = toy_holevo(transcript)
    t = 0 if transcript is None else 1
    f = "none" if transcript is None else "".join(map(str, transcript))
    return BoundCheck(f"lemma2 chi_EC <= chi_E + t [f={f}]", chi_e + t, chi_ec, kind=EXACT, tol=EXACT_TOL)


# --------------------------------------------------------------------------
# Fano and Helstrom floors

@dataclass(frozen=True)
class DiscriminationInstance:
    """``m`` equiprobable real qubit states at angles ``k * spread / m``."""

    m: int
    spread: float

    def states(self) -> list[np.ndarray]:
        angles = [k * self.spread / self.m for k in range(self.m)]
        return [pure([math.cos(a), math.sin(a)]) for a in angles]

    @property
    def label(self) -> str:
        return f"m={self.m},spread={self.spread:.4g}"


def optimal_error(inst: DiscriminationInstance) -> float:
    """Exact optimal error: Helstrom for two states, PGM for the symmetric sets.

    With ``spread = pi`` the states are geometrically uniform (a rotation
    by ``pi/m`` permutes them), where the pretty-good measurement is optimal;
    with ``spread = 0`` all states coincide.
    """
    states = inst.states()
    side = QuantumSideInfo([1.0 / inst.m] * inst.m, list(range(inst.m)), states)
    pgm, exact = guess_quantum(side)
    return 1.0 - (exact if exact is not None else pgm)


def check_fano_helstrom(inst: DiscriminationInstance) -> tuple[BoundCheck, BoundCheck]:
    """Optimal error is at least the Fano floor and the Helstrom floor."""
    states = inst.states()
    chi = holevo_information(Ensemble([1.0 / inst.m] * inst.m, states))
    eps2 = max((trace_distance(a, b) for i, a in enumerate(states) for b in states[i + 1:]), default=0.0)
    err = optimal_error(inst)
    return (BoundCheck(f"fano floor: error >= fano_invert(m, chi) [{inst.label}]",
                       fano_invert(inst.m, chi), err, kind=LOWER, tol=1e-8),
            BoundCheck(f"helstrom floor: error >= 1 - (1 + eps''(m-1))/m [{inst.label}]",
                       helstrom_floor(inst.m, eps2), err, kind=LOWER, tol=EXACT_TOL))


def fano_helstrom_instances() -> list[DiscriminationInstance]:
    out = [DiscriminationInstance(2, math.pi / 2)]
    out += [DiscriminationInstance(m, s) for m in range(2, 9) for s in (math.pi, 0.0)]
    return out


# --------------------------------------------------------------------------
# data processing

def _channel_sample(d: int, rng: np.random.Generator):
    rho = random_state(d, rng)
    sigma = random_state(d, rng)
    ch = random_channel(d, rng, n_kraus=int(rng.integers(1, 4)))
    return rho, sigma, ch


def check_dpi_suite(count: int, dims, rng: np.random.Generator) -> BoundCheck:
    """Largest ``D(Phi rho || Phi sigma) - D(rho || sigma)`` over random samples."""
    worst = -math.inf
    for i in range(count):
        rho, sigma, ch = _channel_sample(dims[i % len(dims)], rng)
        gap = relative_entropy(apply_channel(ch, rho), apply_channel(ch, sigma)) - relative_entropy(rho, sigma)
        worst = max(worst, gap)
    return BoundCheck(f"dpi: max violation over {count} samples, d in {list(dims)}", 0.0, max(worst, 0.0),
                      kind=EXACT, tol=DPI_TOL)


def check_contractivity_suite(count: int, dims, rng: np.random.Generator) -> BoundCheck:
    """Largest trace-distance increase under random channels."""
    worst = -math.inf
    for i in range(count):
        rho, sigma, ch = _channel_sample(dims[i % len(dims)], rng)
        gap = trace_distance(apply_channel(ch, rho), apply_channel(ch, sigma)) - trace_distance(rho, sigma)
        worst = max(worst, gap)
    return BoundCheck(f"contractivity: max trace-distance increase over {count} samples, d in {list(dims)}",
                      0.0, max(worst, 0.0), kind=EXACT, tol=DPI_TOL)


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel([np.eye(d)])


def constant_channel(d: int, target) -> KrausChannel:
    """Replacement channel onto the pure state ``target``: ``K_i = |target><i|``."""
    v = np.asarray(target, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    return KrausChannel([np.outer(v, np.eye(d)[i]) for i in range(d)])


# --------------------------------------------------------------------------
# the full suite

def check_two_universality(family: str, n: int, d: int, trials: int, rng) -> BoundCheck:
    rate, se = collision_estimate(family, n, d, trials, rng)
    return BoundCheck(f"two-universality {family} n={n} d={d}", 2.0 ** -d, rate, se, kind=TWO_SIDED)


def run_verification(seed: int = 42, trials: int = 100_000, threads: int | None = None,
                     collision_trials: int = 1_000_000) -> list[BoundCheck]:
    """All checks at the default desk scale, in a fixed order."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    checks: list[BoundCheck] = []
    for n, d in ((8, 4), (16, 8)):
        checks.append(check_two_universality("toeplitz", n, d, collision_trials, rng))

    for inst in lemma1_grid():
        checks.extend(check_lemma1(inst))

    base = ProtocolConfig(trials=trials, master_seed=seed, attack="optimal")
    for d in (4, 6, 8):
        rep = run_protocol(replace(base, tag_bits=d), threads=threads)
        rate, se = rep.empirical["p_forge"]
        checks.append(check_forgery_family(d, rate, trials, f"D={d},q=0"))
        checks.extend(check_theorem2(rep.delta, rate, se, f"D={d},q=0"))
    rep = run_protocol(replace(base, q_leak=1.0), threads=threads)
    checks.extend(check_theorem2(rep.delta, *rep.empirical["p_forge"], label="q=1"))

    checks.extend(corollary_checks(seed, trials, threads))

    for f in toy_transcripts():
        checks.append(check_lemma2(f))
    for inst in fano_helstrom_instances():
        checks.extend(check_fano_helstrom(inst))

    qrng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    checks.append(check_dpi_suite(500, [2, 3, 4], qrng))
    checks.append(check_contractivity_suite(500, [2, 3, 4], qrng))
    return checks


COROLLARY1_CASES = (
    ("no leakage", dict(q_leak=0.0, tag_bits=4, auth_entropy_bits=4, pa_bits=4)),
    ("boundary chi_EC = H - k", dict(q_leak=0.5, tag_bits=4, auth_entropy_bits=4, pa_bits=4)),
)
COROLLARY2_CASES = (
    ("no leakage, k = l = 4", dict(q_leak=0.0, tag_bits=4, auth_entropy_bits=4, pa_bits=4)),
)


def corollary_checks(seed: int, trials: int, threads: int | None = None) -> list[BoundCheck]:
    reports: dict = {}

    def report(kw):
        cfg = ProtocolConfig(trials=trials, master_seed=seed, attack="optimal", **kw)
        if cfg not in reports:
            reports[cfg] = run_protocol(cfg, threads=threads)
        return cfg, reports[cfg]

    out = []
    for label, kw in COROLLARY1_CASES:
        cfg, rep = report(kw)
        if rep.gate != FEASIBLE:
            raise HypothesisViolated(f"{label}: gate is {rep.gate}")
        out.append(check_corollary1(rep.holevo_chi_after, rep.entropy_H, cfg.auth_entropy_bits,
                                    *rep.empirical["p_auth"], label=label))
    for label, kw in COROLLARY2_CASES:
        cfg, rep = report(kw)
        out.append(check_corollary2(rep.holevo_chi, rep.entropy_H, cfg.auth_entropy_bits, rep.key_length,
                                    *rep.empirical["combined"], label=label))
    return out


def verification_csv(checks) -> str:
    return verdict_csv(checks)
