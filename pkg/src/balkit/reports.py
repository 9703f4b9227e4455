"""Grids, decade-trend diagnostics and the report containers.

Every ``sup over r >= 1`` statement becomes a profile on a finite radius grid.
Boundedness is judged from the trend of the per-decade maxima of a profile:
for every decade ``[10^k R0, 10^(k+1) R0]`` (closed, so decade ends are shared)
we take the largest profile value and the radius where it is attained, and fit
a least-squares line of those maxima against ``log10`` of those radii.  A
bounded profile has slope close to zero; a logarithmically growing one has
slope equal to its growth per decade.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np

from .errors import DomainError

DEFAULT_SLOPE_TOL = 0.05
MIN_DECADES = 3.0

Verdict = Literal["bounded", "diverging", "inconclusive"]
ConditionVerdict = Literal["holds_on_range", "fails", "inconclusive"]


def fmt(x) -> str:
    """Float text with 17 significant digits (round-trips every double)."""
    return format(float(x), ".17g")


def log_grid(r_min: float = 1.0, r_max: float = 1e4, per_decade: int = 4) -> np.ndarray:
    """Log-spaced radii from ``r_min`` to ``r_max`` inclusive."""
    if not (0 < r_min < r_max) or per_decade < 1:
        raise DomainError("grid needs 0 < r_min < r_max and per_decade >= 1")
    n = int(round(math.log10(r_max / r_min) * per_decade))
    pts = r_min * 10.0 ** (np.arange(n + 1) / per_decade)
    pts[-1] = r_max
    return pts


def dyadic_grid(r_min: float = 1.0, exponent: int = 14) -> np.ndarray:
    """``r_min * 2**j`` for ``j = 0..exponent`` (the library default grid)."""
    return r_min * 2.0 ** np.arange(exponent + 1)


def parse_grid(spec: str) -> np.ndarray:
    """Parse ``"rmin:rmax:per_decade"``."""
    try:
        a, b, c = spec.split(":")
        return log_grid(float(a), float(b), int(float(c)))
    except ValueError as exc:
        raise DomainError(f"bad grid spec {spec!r}: {exc}") from exc


def check_radii(radii) -> np.ndarray:
    radii = np.asarray(radii, dtype=float).ravel()
    if radii.size < 2:
        raise DomainError("need at least two radii")
    if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise DomainError("radii must be positive and strictly increasing")
    return radii


def pairs_of(radii) -> tuple[np.ndarray, np.ndarray]:
    """All index pairs ``i < j`` as two arrays."""
    n = len(radii)
    i, j = np.triu_indices(n, k=1)
    return i, j


@dataclass
class Trend:
    decade_radii: list
    decade_max: list
    slope: float
    span_decades: float


def decade_trend(radii, values) -> Trend:
    radii = np.asarray(radii, float)
    values = np.asarray(values, float)
    r0 = radii[0]
    pos = np.log10(radii / r0)
    span = float(pos[-1] - pos[0]) if radii.size else 0.0
    n_dec = max(int(math.ceil(span - 1e-9)), 1)
    xs, ys = [], []
    for k in range(n_dec):
        sel = (pos >= k - 1e-9) & (pos <= k + 1 + 1e-9)
        if not np.any(sel):
            continue
        idx = np.flatnonzero(sel)
        j = idx[int(np.argmax(values[idx]))]
        xs.append(float(np.log10(radii[j])))
        ys.append(float(values[j]))
    if len(xs) >= 2 and np.ptp(xs) > 0:
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = 0.0
    return Trend(xs, ys, slope, span)


def judge(trend: Trend, slope_tol: float) -> Verdict:
    if trend.span_decades < MIN_DECADES - 1e-9:
        return "inconclusive"
    return "bounded" if trend.slope <= slope_tol else "diverging"


def as_condition_verdict(v: Verdict) -> ConditionVerdict:
    return {"bounded": "holds_on_range", "diverging": "fails",
            "inconclusive": "inconclusive"}[v]


def running_max(values) -> np.ndarray:
    return np.maximum.accumulate(np.asarray(values, float))


@dataclass
class DominationReport:
    """Excess profile ``l_nu - l_mu`` on a grid with its boundedness verdict."""

    radii: list
    r_values: list
    R_values: list
    excess: list
    profile: list  # running sup of the excess, indexed by the right end
    sup_excess: float
    slope: float
    verdict: Verdict
    slope_tol: float
    kind: str = "dominates"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "R", "excess"])
        for r, R, e in zip(self.r_values, self.R_values, self.excess):
            w.writerow([fmt(r), fmt(R), fmt(e)])
        return buf.getvalue()


@dataclass
class ConditionReport:
    """Partial values of a condition on a radius grid plus a range verdict."""

    tag: str
    radii: list
    partials: list
    running_sup: list
    slope: float
    verdict: ConditionVerdict
    slope_tol: float
    extra: dict = field(default_factory=dict)

    def holds(self) -> bool:
        return self.verdict == "holds_on_range"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "partial", "running_sup"])
        for r, p, s in zip(self.radii, self.partials, self.running_sup):
            w.writerow([fmt(r), fmt(p), fmt(s)])
        return buf.getvalue()


def condition_report(tag: str, radii, partials, slope_tol: float = DEFAULT_SLOPE_TOL,
                     magnitudes=None, extra: dict | None = None) -> ConditionReport:
    """Build a report from signed (or complex) partials; the verdict uses ``|partial|``."""
    radii = np.asarray(radii, float)
    partials = np.asarray(partials)
    mags = np.abs(partials) if magnitudes is None else np.asarray(magnitudes, float)
    sup = running_max(mags)
    tr = decade_trend(radii, sup)
    verdict = as_condition_verdict(judge(tr, slope_tol))
    if np.iscomplexobj(partials):
        extra = dict(extra or {})
        extra["partials_imag"] = partials.imag.tolist()
        partials = partials.real
    return ConditionReport(tag, radii.tolist(), np.asarray(partials, float).tolist(),
                           sup.tolist(), tr.slope, verdict, slope_tol, extra or {})
