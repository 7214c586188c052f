"""Three-step key agreement at desk scale.

Each trial runs syndrome error correction, privacy amplification to the
Holevo-limited length and one-time authentication keyed by Alice's raw
key, then lets Eve attack the authenticated message. Eve's view is the
per-bit erasure wiretap plus every public message, so her posterior on
``x_A`` is uniform on an affine subspace and all of her optimal actions
are exact rank computations (see :mod:`holevo_auth.adversary`).

The entropy bookkeeping uses the accounting bound: ``chi_EC = chi_E + t``
where ``t`` counts every public bit that depends on the key (syndromes and
the tag, and the privacy amplification seed when configured to).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from functools import cached_property

import numpy as np

from . import gf2
from .adversary import ATTACK_POLICIES, AffineKnowledge, forge_int
from .entropy import mutual_information
from .errors import ConfigError, DecodingFailure, KeyLengthNonpositive
from .hashing import KeyedToeplitzMAC, evaluate, sample_toeplitz, toeplitz_instance
from .verdict import EXACT, LOWER, BoundCheck, all_passed, verdict_csv

FEASIBLE = "Feasible"
INFEASIBLE = "Infeasible"
#: Qualitative floor for the forgery rate when the Holevo gap is not positive.
INFEASIBLE_FORGE_FLOOR = 0.1


# --------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class ProtocolConfig:
    n: int = 16
    flip_prob: float = 0.0
    q_leak: float = 0.0
    eps_S: float = 2.0 ** -8
    tag_bits: int = 4
    auth_entropy_bits: int = 4
    trials: int = 10_000
    master_seed: int = 42
    ec_code: str = "none"
    pa_seed_counts_as_leakage: bool = False
    pa_bits: int | None = None
    attack: str = "random_tag"

    def __post_init__(self):
        if not 1 <= self.n <= 20:
            raise ConfigError(f"n={self.n} outside 1..20")
        if not 0.0 <= self.flip_prob <= 0.5:
            raise ConfigError("flip_prob must lie in [0, 1/2]")
        if not 0.0 <= self.q_leak <= 1.0:
            raise ConfigError("q_leak must lie in [0, 1]")
        if not 0.0 < self.eps_S < 1.0:
            raise ConfigError("eps_S must lie in (0, 1)")
        if not 1 <= self.tag_bits <= self.n:
            raise ConfigError("tag_bits must lie in 1..n")
        if self.n - 2 * self.tag_bits + 1 < 1:
            raise ConfigError(f"a {self.n}-bit key leaves no message space for "
                              f"{self.tag_bits}-bit tags (need 2*tag_bits <= n)")
        if self.auth_entropy_bits < 0:
            raise ConfigError("auth_entropy_bits must be >= 0")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.pa_bits is not None and not 1 <= self.pa_bits <= self.n:
            raise ConfigError("pa_bits must lie in 1..n")
        if self.attack not in ATTACK_POLICIES:
            raise ConfigError(f"attack must be one of {ATTACK_POLICIES}")
        code_for(self.ec_code, self.n)


_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def _coerce(name: str, raw: str):
    kinds = {f.name: f.type for f in fields(ProtocolConfig)}
    if name not in kinds:
        raise ConfigError(f"unknown config key {name!r}")
    kind = kinds[name]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "bool":
            return _BOOL[raw.lower()]
        if kind == "int | None":
            return None if raw.lower() in ("", "none") else int(raw)
        return raw
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad value {raw!r} for {name}") from exc


def parse_config(text: str, base: ProtocolConfig | None = None) -> ProtocolConfig:
    """Read ``key = value`` lines (``#`` starts a comment) over ``base``."""
    updates = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        updates[key] = _coerce(key, value)
    return replace(base or ProtocolConfig(), **updates)


def load_config(path) -> ProtocolConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def format_config(cfg: ProtocolConfig) -> str:
    return "".join(f"{f.name} = {getattr(cfg, f.name)}\n" for f in fields(cfg))


# --------------------------------------------------------------------------
# transcript

@dataclass
class Transcript:
    """Ordered public messages ``(sender, label, payload bits)``."""

    messages: list = field(default_factory=list)

    def append(self, sender: str, label: str, bits) -> None:
        self.messages.append((sender, label, gf2.as_bits(bits)))

    @property
    def total_bits(self) -> int:
        return sum(len(b) for _, _, b in self.messages)

    def last(self, label: str):
        for _, lab, bits in reversed(self.messages):
            if lab == label:
                return bits
        raise KeyError(label)


# --------------------------------------------------------------------------
# error correction

HAMMING74 = np.array([[0, 0, 0, 1, 1, 1, 1],
                      [0, 1, 1, 0, 0, 1, 1],
                      [1, 0, 1, 0, 1, 0, 1]], dtype=np.uint8)
REP3 = np.array([[1, 1, 0],
                 [0, 1, 1]], dtype=np.uint8)


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Parity-check matrix ``H`` (``s x b``) applied to consecutive blocks.

    Bits past the last whole block are left uncorrected.
    """

    name: str
    check: np.ndarray
    n: int

    @property
    def block(self) -> int:
        return self.check.shape[1]

    @property
    def blocks(self) -> int:
        return self.n // self.block

    @property
    def syndrome_bits(self) -> int:
        return self.check.shape[0] * self.blocks

    @cached_property
    def min_distance(self) -> int:
        b = self.block
        rows = gf2.rows_to_ints(self.check)
        best = b + 1
        for w in range(1, 1 << b):
            if all(gf2.parity(r & w) == 0 for r in rows):
                best = min(best, w.bit_count())
        return best

    @property
    def radius(self) -> int:
        return min(self.block, (self.min_distance - 1) // 2)

    @cached_property
    def leaders(self) -> dict[int, int]:
        """Syndrome -> minimum-weight error pattern within the radius."""
        b = self.block
        rows = gf2.rows_to_ints(self.check)
        table: dict[int, int] = {}
        for e in sorted(range(1 << b), key=lambda v: (v.bit_count(), v)):
            if e.bit_count() > self.radius:
                break
            s = 0
            for r in rows:
                s = (s << 1) | gf2.parity(r & e)
            table.setdefault(s, e)
        return table

    @cached_property
    def full_rows(self) -> tuple[int, ...]:
        """Syndrome rows as integers over all ``n`` key bits (MSB-first)."""
        out = []
        for k in range(self.blocks):
            shift = self.n - (k + 1) * self.block
            out.extend(r << shift for r in gf2.rows_to_ints(self.check))
        return tuple(out)

    def syndrome(self, x) -> np.ndarray:
        v = gf2.bits_to_int(x)
        return np.array([gf2.parity(r & v) for r in self.full_rows], dtype=np.uint8)

    def decode(self, x_b, syndrome_a) -> np.ndarray:
        """Bob's estimate of ``x_A`` from his bits and Alice's syndrome."""
        diff = self.syndrome(x_b) ^ gf2.as_bits(syndrome_a, self.syndrome_bits)
        out = gf2.as_bits(x_b).copy()
        s, b = self.check.shape[0], self.block
        for k in range(self.blocks):
            key = gf2.bits_to_int(diff[k * s:(k + 1) * s])
            if key not in self.leaders:
                raise DecodingFailure(f"block {k}: syndrome {key:b} has no leader within radius {self.radius}")
            out[k * b:(k + 1) * b] ^= gf2.int_to_bits(self.leaders[key], b)
        return out

    def agreement_probability(self, flip_prob: float) -> float:
        """Exact probability that decoding returns ``x_A`` over BSC noise."""
        b = self.block
        per_block = sum(flip_prob ** e.bit_count() * (1 - flip_prob) ** (b - e.bit_count())
                        for e in self.leaders.values())
        return per_block ** self.blocks * (1 - flip_prob) ** (self.n - self.blocks * b)


def code_for(spec: str, n: int) -> LinearCode | None:
    """``none``, ``hamming74``, ``rep3`` or ``custom:<row>,<row>,...``."""
    spec = spec.strip().lower()
    if spec == "none":
        return None
    if spec == "hamming74":
        h = HAMMING74
    elif spec == "rep3":
        h = REP3
    elif spec.startswith("custom:"):
        rows = [r.strip() for r in spec[7:].split(",") if r.strip()]
        if not rows or len({len(r) for r in rows}) != 1 or any(set(r) - {"0", "1"} for r in rows):
            raise ConfigError(f"bad custom parity-check rows {spec!r}")
        h = np.array([[int(c) for c in r] for r in rows], dtype=np.uint8)
    else:
        raise ConfigError(f"unknown ec_code {spec!r}")
    if h.shape[1] > n:
        raise ConfigError(f"code block {h.shape[1]} exceeds n={n}")
    if h.shape[0] > 12:
        raise ConfigError("syndrome tables are limited to 12 check rows")
    return LinearCode(spec, h, n)


def error_correction(x_a, x_b, code: LinearCode | None, transcript: Transcript) -> np.ndarray:
    """Alice publishes her syndrome; Bob decodes. Returns Bob's corrected key."""
    if code is None:
        return gf2.as_bits(x_b).copy()
    transcript.append("alice", "syndrome", code.syndrome(x_a))
    return code.decode(x_b, transcript.last("syndrome"))


# --------------------------------------------------------------------------
# keys, leakage and the gate

@dataclass(frozen=True)
class ErasureView:
    """Eve's wiretap: ``bits[i]`` is known iff ``mask[i]``."""

    mask: np.ndarray
    bits: np.ndarray

    def constraints(self, n: int) -> tuple[list[int], list[int]]:
        idx = np.nonzero(self.mask)[0]
        return [1 << (n - 1 - int(i)) for i in idx], [int(self.bits[i]) for i in idx]


def generate_correlated_keys(cfg: ProtocolConfig, rng: np.random.Generator):
    """``(x_A, x_B, eve_view)`` under the BSC pairing and erasure wiretap."""
    x_a = rng.integers(0, 2, cfg.n, dtype=np.uint8)
    noise = (rng.random(cfg.n) < cfg.flip_prob).astype(np.uint8)
    mask = rng.random(cfg.n) < cfg.q_leak
    return x_a, x_a ^ noise, ErasureView(mask, np.where(mask, x_a, 0).astype(np.uint8))


def erasure_joint(n: int, q: float) -> np.ndarray:
    """Joint table of a uniform ``n``-bit key and its erasure view.

    Side symbols are base-3 strings (erased, saw 0, saw 1) indexed MSB-first.
    """
    one = np.array([[(1 - q) / 2, q / 2, 0.0],
                    [(1 - q) / 2, 0.0, q / 2]])
    # columns: erased, saw 0, saw 1
    j = np.ones((1, 1))
    for _ in range(n):
        j = np.einsum("ae,bf->abef", j, one).reshape(j.shape[0] * 2, j.shape[1] * 3)
    return j


def erasure_holevo(n: int, q: float) -> float:
    """Holevo information of the erasure wiretap on a uniform key (additive)."""
    one = np.array([[(1 - q) / 2, q / 2, 0.0], [(1 - q) / 2, 0.0, q / 2]])
    return n * mutual_information(one)


def leakage_update(chi_before: float, transcript: Transcript) -> float:
    if chi_before < 0:
        raise ValueError("chi_before must be >= 0")
    return chi_before + transcript.total_bits


def f_dp(chi: float, entropy_h: float) -> float:
    """``min(1, 2**-(H - chi))``."""
    return min(1.0, 2.0 ** -(entropy_h - chi))


def holevo_gap(entropy_h: float, chi: float) -> tuple[float, str]:
    delta = entropy_h - chi
    return delta, FEASIBLE if delta > 0 else INFEASIBLE


# --------------------------------------------------------------------------
# privacy amplification and authentication

def pa_key_length(n: int, chi_after: float, eps_S: float) -> int:
    return math.floor(n - chi_after - math.log2(1.0 / eps_S) + 1e-12)


def privacy_amplification(x, chi_after: float, eps_S: float, rng: np.random.Generator,
                          transcript: Transcript, length: int | None = None):
    """Compress ``x`` to ``l = floor(n - chi_after - log2(1/eps_S))`` bits.

    A fresh Toeplitz seed is sampled and published on ``transcript``; Bob
    rebuilds the same map with :func:`apply_published_pa`. ``length``
    overrides the formula.
    """
    x = gf2.as_bits(x)
    n = len(x)
    l = pa_key_length(n, chi_after, eps_S) if length is None else length
    if l < 1:
        raise KeyLengthNonpositive(
            f"key length floor({n} - {chi_after:g} - log2(1/{eps_S:g})) = {l} < 1")
    h = sample_toeplitz(n, l, rng)
    transcript.append("alice", "pa_seed", np.concatenate([h.diagonal, h.offset]))
    return evaluate(h, x), l


def published_pa(transcript: Transcript, n: int):
    seed = transcript.last("pa_seed")
    l = (len(seed) - n + 1) // 2
    return toeplitz_instance(seed[:n + l - 1], seed[n + l - 1:], n, l)


def apply_published_pa(x, transcript: Transcript) -> np.ndarray:
    x = gf2.as_bits(x)
    return evaluate(published_pa(transcript, len(x)), x)


def authenticate_exchange(x_key, message, scheme, transcript: Transcript):
    """Tag ``message`` under ``x_key`` and publish ``(M, T)``.

    Returns ``(T, verify)`` where ``verify(M*, T*)`` accepts iff the tag of
    ``M*`` under ``x_key`` equals ``T*``. ``scheme`` is a MAC scheme from
    :mod:`holevo_auth.hashing` or a public hash instance (tagging
    ``key || message``).
    """
    from .adversary import _as_scheme

    x_key = gf2.as_bits(x_key)
    scheme = _as_scheme(scheme, len(x_key))
    tag = scheme.tag(x_key, message)
    transcript.append("alice", "message", message)
    transcript.append("alice", "tag", tag)

    def verify(m_star, t_star) -> bool:
        return bool(np.array_equal(scheme.tag(x_key, m_star), gf2.as_bits(t_star, scheme.tag_bits)))

    return tag, verify


# --------------------------------------------------------------------------
# the simulator

@dataclass(frozen=True)
class Plan:
    """Per-configuration quantities shared by every trial."""

    cfg: ProtocolConfig
    code: LinearCode | None
    scheme: KeyedToeplitzMAC
    entropy_h: float
    chi_e: float
    t_bits: int
    chi_after: float
    gate_delta: float
    gate: str
    key_length: int
    abort_reason: str


def plan(cfg: ProtocolConfig) -> Plan:
    code = code_for(cfg.ec_code, cfg.n)
    scheme = KeyedToeplitzMAC.for_key_length(cfg.n, cfg.tag_bits)
    chi_e = erasure_holevo(cfg.n, cfg.q_leak)
    t = (code.syndrome_bits if code else 0) + cfg.tag_bits
    chi_after = chi_e + t
    l = pa_key_length(cfg.n, chi_after, cfg.eps_S) if cfg.pa_bits is None else cfg.pa_bits
    if cfg.pa_seed_counts_as_leakage:
        seed = cfg.n + 2 * max(l, 1) - 1
        t += seed
        chi_after += seed
        if cfg.pa_bits is None:
            l = pa_key_length(cfg.n, chi_after, cfg.eps_S)
    delta, gate = holevo_gap(float(cfg.n), chi_after)
    reason = ""
    if gate == INFEASIBLE:
        reason = "infeasible"
    elif l < 1:
        reason = "key_length"
    return Plan(cfg, code, scheme, float(cfg.n), chi_e, t, chi_after, delta, gate, l, reason)


# columns of the per-trial record array
_COLS = ("decode_fail", "ec_ok", "issued", "keys_agree", "genuine_ok", "p_guess",
         "fa", "forged", "forge_prob", "secrecy_adv", "secrecy_event", "combined")


def _trial(p: Plan, index: int, cache: dict) -> np.ndarray:
    cfg = p.cfg
    n = cfg.n
    scheme = p.scheme
    rng = np.random.default_rng(np.random.SeedSequence([cfg.master_seed, index]))
    rec = np.zeros(len(_COLS))
    x_a, x_b, view = generate_correlated_keys(cfg, rng)
    tr = Transcript()
    rows, rhs = view.constraints(n)
    try:
        x_bc = error_correction(x_a, x_b, p.code, tr)
    except DecodingFailure:
        rec[0] = 1
        x_bc = None
    if p.code is not None:
        rows += list(p.code.full_rows)
        rhs += tr.last("syndrome").tolist()
    eve = AffineKnowledge(n, rows, rhs)
    rec[5] = eve.guess_probability()
    if x_bc is None:
        return rec
    rec[1] = np.array_equal(x_bc, x_a)

    ka, kb = gf2.bits_to_int(x_a), gf2.bits_to_int(x_bc)
    m_int = int(rng.integers(0, 1 << scheme.message_bits))
    t_int = scheme.tag_int(ka, m_int)
    tr.append("alice", "message", gf2.int_to_bits(m_int, scheme.message_bits))
    tr.append("alice", "tag", gf2.int_to_bits(t_int, scheme.tag_bits))
    rec[4] = scheme.tag_int(kb, m_int) == t_int

    after, mf, tf, prob = forge_int(scheme, eve, m_int, t_int, cache)
    rec[7] = scheme.tag_int(kb, mf) == tf
    rec[8] = prob
    if cfg.attack == "optimal":
        rec[6] = rec[7]
    elif cfg.attack == "random_tag":
        other = int(rng.integers(0, (1 << scheme.message_bits) - 1))
        other += other >= m_int
        rec[6] = scheme.tag_int(kb, other) == int(rng.integers(0, 1 << scheme.tag_bits))

    if p.abort_reason:
        return rec
    rec[2] = 1
    key_a, l = privacy_amplification(x_a, p.chi_after, cfg.eps_S, rng, tr, length=p.key_length)
    h_pa = published_pa(tr, n)
    rec[3] = np.array_equal(key_a, evaluate(h_pa, x_bc))
    rec[9] = 1.0 - 2.0 ** (after.image_rank(gf2.rows_to_ints(h_pa.matrix)) - l)
    rec[10] = rng.random() < rec[9]
    rec[11] = bool(rec[7]) or bool(rec[10])
    return rec


def simulate_trials(p: Plan, trials: int, threads: int | None = None) -> np.ndarray:
    """Per-trial records, row ``i`` from the seed ``(master_seed, i)``."""
    threads = threads or os.cpu_count() or 1
    out = np.zeros((trials, len(_COLS)))
    cache: dict = {}

    def work(lo, hi):
        for i in range(lo, hi):
            out[i] = _trial(p, i, cache)

    step = max(1, -(-trials // (threads * 4)))
    spans = [(lo, min(trials, lo + step)) for lo in range(0, trials, step)]
    if threads == 1:
        for lo, hi in spans:
            work(lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda s: work(*s), spans))
    return out


def _rate(x: np.ndarray) -> tuple[float, float]:
    if x.size == 0:
        return float("nan"), 0.0
    m = float(x.mean())
    return m, float(x.std(ddof=0) / math.sqrt(x.size))


@dataclass
class SecurityReport:
    config: ProtocolConfig
    holevo_chi: float
    holevo_chi_after: float
    entropy_H: float
    delta: float
    gate_delta: float
    gate: str
    key_length: int | None
    f_dp_value: float
    fa_bound: float
    unified_epsilon: float
    transcript_bits: int
    counts: dict
    empirical: dict
    verdicts: list

    @property
    def passed(self) -> bool:
        return all_passed(self.verdicts)

    def to_csv(self) -> str:
        return verdict_csv(self.verdicts)

    def summary(self) -> str:
        c, e = self.counts, self.empirical
        lines = [
            "holevo-auth security report",
            f"  f_DP(chi) = min(1, 2^-(H - chi))",
            f"  H = {self.entropy_H:g}  chi_E = {self.holevo_chi:.6g}  t = {self.transcript_bits}"
            f"  chi_EC <= {self.holevo_chi_after:.6g}",
            f"  delta = H - chi_E = {self.delta:.6g}  gate (H - chi_EC = {self.gate_delta:.6g}): {self.gate}",
            f"  key length l = {self.key_length if self.key_length is not None else '-'}",
            f"  unified epsilon = {self.f_dp_value:.6g} + {self.fa_bound:.6g} = {self.unified_epsilon:.6g}",
            f"  trials {c['trials']}, keys issued {c['keys_issued']}, aborted {c['aborted']}"
            f" (decoding {c['decode_fail']}, gate/length {c['gate_aborts']})",
        ]
        for name, (rate, se) in e.items():
            lines.append(f"  {name:<14} {rate:.6g} +/- {se:.3g}")
        lines.append("  verdicts:")
        for v in self.verdicts:
            lines.append(f"    [{v.status:>7}] {v.name}: measured {v.measured:.6g} vs bound {v.bound:.6g}")
        return "\n".join(lines) + "\n"


def run_protocol(cfg: ProtocolConfig, attack: str | None = None, trials: int | None = None,
                 threads: int | None = None) -> SecurityReport:
    if attack is not None:
        cfg = replace(cfg, attack=attack)
    trials = cfg.trials if trials is None else trials
    p = plan(cfg)
    recs = simulate_trials(p, trials, threads)
    col = {name: recs[:, i] for i, name in enumerate(_COLS)}
    ran = col["decode_fail"] == 0
    issued = col["issued"] == 1

    fdp = f_dp(p.chi_after, p.entropy_h)
    fa_bound = 2.0 ** -cfg.tag_bits
    eps = fdp + fa_bound
    k = cfg.auth_entropy_bits
    l = p.key_length if not p.abort_reason else None

    emp = {
        "p_guess": _rate(col["p_guess"]),
        "p_FA": _rate(col["fa"][ran]),
        "p_forge": _rate(col["forged"][ran]),
        "p_auth": _rate(col["forged"][ran] if p.gate == FEASIBLE else col["forged"][:0]),
        "secrecy": _rate(col["secrecy_event"][issued]),
        "combined": _rate(col["combined"][issued]),
        "ec_agree": _rate(col["ec_ok"][ran]),
    }
    v = [
        BoundCheck("f_dp: p_guess <= min(1, 2^-(H - chi_EC))", fdp, *emp["p_guess"]),
        # the 2^-D bound assumes a forger who does not hold the key
        BoundCheck(f"p_FA[{cfg.attack}] <= 2^-D", fa_bound, *emp["p_FA"],
                   vacuous=cfg.attack == "optimal" and p.gate == INFEASIBLE),
        BoundCheck("p_forge <= unified epsilon", eps, *emp["p_forge"]),
    ]
    hyp1 = p.chi_after <= p.entropy_h - k + 1e-12
    v.append(BoundCheck("corollary1: p_auth <= 2^-k", 2.0 ** -k, *_finite(emp["p_auth"]),
                        vacuous=not (hyp1 and p.gate == FEASIBLE and ran.any())))
    l_eff = l if l is not None else 0
    hyp2 = l is not None and p.chi_e <= p.entropy_h - k - l_eff + 1e-12
    v.append(BoundCheck("corollary2: combined failure <= 2^-k + 2^-l", 2.0 ** -k + 2.0 ** -l_eff,
                        *_finite(emp["combined"]), vacuous=not (hyp2 and issued.any())))
    gate_bad = float(np.sum(issued & (p.gate_delta <= 0)))
    v.append(BoundCheck("gate soundness: keys issued with delta <= 0", 0.0, gate_bad, kind=EXACT))
    if p.code is not None:
        v.append(BoundCheck("error correction: agreement >= coset-leader probability",
                            p.code.agreement_probability(cfg.flip_prob), *emp["ec_agree"], kind=LOWER))
    if cfg.flip_prob == 0:
        mismatch = float(np.sum(issued & (col["keys_agree"] == 0)))
        v.append(BoundCheck("completeness: final key mismatches", 0.0, mismatch, kind=EXACT))
    v.append(BoundCheck("theorem2 infeasible branch: p_forge >= floor", INFEASIBLE_FORGE_FLOOR,
                        *emp["p_forge"], kind=LOWER, vacuous=p.gate != INFEASIBLE))

    counts = {
        "trials": trials,
        "keys_issued": int(issued.sum()),
        "aborted": int(trials - issued.sum()),
        "decode_fail": int((~ran).sum()),
        "gate_aborts": int((ran & ~issued).sum()),
    }
    return SecurityReport(cfg, p.chi_e, p.chi_after, p.entropy_h, p.entropy_h - p.chi_e,
                          p.gate_delta, p.gate, l, fdp, fa_bound, eps, p.t_bits, counts, emp, v)


def _finite(pair: tuple[float, float]) -> tuple[float, float]:
    rate, se = pair
    return (0.0, 0.0) if math.isnan(rate) else (rate, se)
