"""``holevo-auth`` command line.

Exit codes: 0 success, 1 a bound check failed, 2 usage or configuration
error. ``HOLEVO_AUTH_SEED`` overrides ``--seed`` when set.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import entropy as ent
from .bounds import run_verification
from .errors import HolevoAuthError
from .hashing import PARITYCHECK, TOEPLITZ, collision_estimate
from .protocol import ProtocolConfig, load_config, run_protocol
from .quantum import Ensemble, holevo_information, von_neumann_entropy
from .verdict import verdict_csv

OK, FAIL, USAGE = 0, 1, 2
SWEEP_PARAMS = {"q_leak": float, "flip_prob": float, "tag_bits": int, "eps_S": float}


class UsageError(Exception):
    pass


def _seed(args) -> int:
    env = os.environ.get("HOLEVO_AUTH_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"HOLEVO_AUTH_SEED={env!r} is not an integer") from exc
    return args.seed


def _threads(args) -> int:
    return args.threads or os.cpu_count() or 1


def manifest(subcommand: str, config: str | None, seed: int, output: str | None) -> str:
    now = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return (f"# subcommand: {subcommand}\n# config: {config or '-'}\n# seed: {seed}\n"
            f"# output: {output or '-'}\n# emitted_at: {now}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _num(x: float) -> str:
    return repr(round(float(x), 9) + 0.0)


# --------------------------------------------------------------------------
# subcommands

def _read_dist(args) -> np.ndarray:
    text = Path(args.file).read_text() if args.file else args.dist
    if text is None:
        raise UsageError("give --dist or --file")
    try:
        p = np.array([float(t) for t in text.replace("\n", ",").split(",") if t.strip()])
    except ValueError as exc:
        raise UsageError(f"malformed distribution: {exc}") from exc
    if p.size == 0 or (p < 0).any() or abs(p.sum() - 1.0) > 1e-6:
        raise UsageError(f"malformed distribution (sum {p.sum():.9g}, must be 1 within 1e-6)")
    return p / p.sum()


def cmd_entropy(args) -> int:
    p = _read_dist(args)
    print(f"H={_num(ent.shannon_entropy(p))} Hmin={_num(ent.min_entropy(p))} H0={_num(ent.zero_entropy(p))}")
    return OK


def parse_ensemble(text: str) -> Ensemble:
    """Lines ``p | re,im; re,im; ...`` holding a row-major ``d x d`` matrix."""
    probs, states = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            p_text, m_text = line.split("|", 1)
            entries = [e for e in m_text.replace(" ", "").split(";") if e]
            vals = [complex(float(e.split(",")[0]), float(e.split(",")[1])) for e in entries]
        except (ValueError, IndexError) as exc:
            raise UsageError(f"line {lineno}: expected 'p | re,im;...'") from exc
        d = int(round(len(vals) ** 0.5))
        if d * d != len(vals):
            raise UsageError(f"line {lineno}: square: {len(vals)} entries is not d*d")
        probs.append(float(p_text))
        states.append(np.array(vals).reshape(d, d))
    if not probs:
        raise UsageError("empty ensemble file")
    return Ensemble(probs, states)


def cmd_holevo(args) -> int:
    e = parse_ensemble(Path(args.file).read_text())
    print(f"chi={_num(holevo_information(e))} S_avg={_num(von_neumann_entropy(e.average()))}")
    return OK


def cmd_fano(args) -> int:
    print(f"{ent.fano_invert(args.m, args.chi):.9f}")
    return OK


def cmd_hash_test(args) -> int:
    seed = _seed(args)
    rng = np.random.default_rng(seed)
    rate, se = collision_estimate(args.family, args.n, args.d, args.trials, rng)
    target = 2.0 ** -args.d
    z = (rate - target) / se if se > 0 else 0.0
    print(f"family={args.family} n={args.n} d={args.d} trials={args.trials} "
          f"rate={rate:.6g} stderr={se:.3g} target={target:.6g} z={z:+.2f}")
    return OK if rate <= target + 4 * se else FAIL


def _config(args) -> ProtocolConfig:
    cfg = load_config(args.config) if args.config else ProtocolConfig()
    updates = {"master_seed": _seed(args)}
    if args.trials is not None:
        updates["trials"] = args.trials
    if getattr(args, "attack", None):
        updates["attack"] = args.attack
    return replace(cfg, **updates)


def cmd_simulate(args) -> int:
    cfg = _config(args)
    rep = run_protocol(cfg, threads=_threads(args))
    _emit(manifest("simulate", args.config, cfg.master_seed, args.out) + rep.to_csv(), args.out)
    print(rep.summary(), end="", file=sys.stdout if args.out else sys.stderr)
    return OK if rep.passed else FAIL


def cmd_verify(args) -> int:
    seed = _seed(args)
    checks = run_verification(seed, trials=args.trials, threads=_threads(args),
                              collision_trials=args.collision_trials)
    _emit(manifest("verify", None, seed, args.out) + verdict_csv(checks), args.out)
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks)} checks, {len(failed)} failed", file=sys.stdout if args.out else sys.stderr)
    return OK if not failed else FAIL


def cmd_sweep(args) -> int:
    values = [v.strip() for v in (args.values or "").split(",") if v.strip()]
    if not values:
        raise UsageError("--values is empty")
    conv = SWEEP_PARAMS[args.param]
    base = _config(args)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    combined, ok = [], True
    for raw in values:
        try:
            value = conv(raw)
        except ValueError as exc:
            raise UsageError(f"bad value {raw!r} for {args.param}") from exc
        rep = run_protocol(replace(base, **{args.param: value}), threads=_threads(args))
        ok &= rep.passed
        body = rep.to_csv()
        (out_dir / f"sweep_{args.param}_{raw}.csv").write_text(
            manifest("sweep", args.config, base.master_seed, str(out_dir)) + body, encoding="utf-8")
        rows = verdict_csv(rep.verdicts, {"param_value": raw}).splitlines(keepends=True)
        combined.extend(rows if not combined else rows[1:])
    (out_dir / f"sweep_{args.param}.csv").write_text(
        manifest("sweep", args.config, base.master_seed, str(out_dir)) + "".join(combined), encoding="utf-8")
    print(f"{len(values)} runs written to {out_dir}")
    return OK if ok else FAIL


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holevo-auth", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="Shannon, min- and 0-entropy of a distribution")
    p.add_argument("--dist", help="comma-separated probabilities")
    p.add_argument("--file", help="file of probabilities (comma or newline separated)")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("holevo", help="Holevo information of an ensemble file")
    p.add_argument("file", help="lines of 'p | re,im;re,im;...'")
    p.set_defaults(func=cmd_holevo)

    p = sub.add_parser("fano", help="minimal error probability allowed by Fano's inequality")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--chi", type=float, required=True)
    p.set_defaults(func=cmd_fano)

    def common(q, trials_default=None):
        q.add_argument("--seed", type=int, default=42)
        q.add_argument("--trials", type=int, default=trials_default)
        q.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
        q.add_argument("--out")

    p = sub.add_parser("hash-test", help="empirical collision rate of a hash family")
    p.add_argument("--family", choices=(TOEPLITZ, PARITYCHECK), default=TOEPLITZ)
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--d", type=int, default=8)
    common(p, 1_000_000)
    p.set_defaults(func=cmd_hash_test)

    for name, func in (("simulate", cmd_simulate), ("sweep", cmd_sweep)):
        p = sub.add_parser(name, help="run the protocol simulator" if name == "simulate"
                           else "simulate over a list of parameter values")
        p.add_argument("--config")
        p.add_argument("--attack", choices=("replay", "random_tag", "optimal"))
        common(p)
        if name == "sweep":
            p.add_argument("--param", choices=tuple(SWEEP_PARAMS), required=True)
            p.add_argument("--values", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run the full bound-verification suite")
    common(p, 100_000)
    p.add_argument("--collision-trials", type=int, default=1_000_000)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        return args.func(args)
    except (UsageError, HolevoAuthError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
