"""Verdict rows shared by the protocol report and the bounds harness."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

UPPER = "upper"
LOWER = "lower"
EXACT = "exact"
TWO_SIDED = "two_sided"

CSV_FIELDS = ("bound_name", "bound_value", "measured", "stderr", "pass")


@dataclass(frozen=True)
class BoundCheck:
    """One comparison of a measured quantity against an analytic bound.

    ``kind`` is ``upper`` (measured must not exceed the bound), ``lower``
    (must not fall below it), ``two_sided`` (must agree with it) or
    ``exact`` (upper comparison with an absolute tolerance and no standard
    error). A ``vacuous`` check records a bound whose hypothesis failed; it
    never counts as a failure.
    """

    name: str
    bound: float
    measured: float
    stderr: float = 0.0
    slack_sigmas: float = 4.0
    kind: str = UPPER
    tol: float = 1e-9
    vacuous: bool = False

    @property
    def passed(self) -> bool:
        if self.vacuous:
            return True
        if self.kind == EXACT:
            return self.measured <= self.bound + self.tol
        slack = self.slack_sigmas * self.stderr + self.tol
        if self.kind == LOWER:
            return self.measured >= self.bound - slack
        if self.kind == TWO_SIDED:
            return abs(self.measured - self.bound) <= slack
        return self.measured <= self.bound + slack

    @property
    def status(self) -> str:
        if self.vacuous:
            return "vacuous"
        return "true" if self.passed else "false"

    def row(self) -> tuple[str, str, str, str, str]:
        return (self.name, _fmt(self.bound), _fmt(self.measured), _fmt(self.stderr), self.status)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)


def verdict_csv(checks, prefix_columns: dict | None = None) -> str:
    """CSV body (header line plus one row per check)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    extra = list(prefix_columns or {})
    w.writerow(extra + list(CSV_FIELDS))
    for c in checks:
        w.writerow([prefix_columns[k] for k in extra] + list(c.row()))
    return buf.getvalue()
