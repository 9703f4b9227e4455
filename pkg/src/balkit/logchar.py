"""Logarithmic interval functions of charges and the boundary integral J.

For a charge ``nu`` and an annulus ``r < |z| <= R``

* the right function sums ``m Re(1/z)`` over atoms with ``Re z > 0``,
* the left function sums ``-m Re(1/z)`` over atoms with ``Re z < 0``,
* for positive measures the submeasure is the larger of the two.

Atoms on the imaginary axis never contribute.  Sums over a fixed window are
formed with :func:`math.fsum`, so charges that differ by an exact symmetry
produce bitwise identical values.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Callable, Literal, NamedTuple, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .measures import DiscreteCharge
from .quadrature import QuadResult, gk15_adaptive
from .reports import (DEFAULT_SLOPE_TOL, DominationReport, check_radii, decade_trend, fmt,
                      judge, running_max)

Side = Literal["right", "left", "sub"]


class IntervalPair(NamedTuple):
    r: float
    R: float


def _check_interval(r: float, R: float, allow_zero: bool = False) -> None:
    if not (math.isfinite(r) and (math.isfinite(R) or R == math.inf)):
        raise DomainError("interval ends must be numbers")
    if r < 0 or (r == 0 and not allow_zero) or not r < R:
        raise DomainError(f"need 0 < r < R, got ({r}, {R})")


def side_weights(nu: DiscreteCharge, side: Literal["right", "left"]) -> np.ndarray:
    """Per-atom contribution ``m Re(1/z)`` (right) or ``-m Re(1/z)`` (left)."""
    x, y = nu.z.real, nu.z.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_re = np.where(x != 0, x / (x * x + y * y), 0.0)
    if side == "right":
        return np.where(x > 0, nu.m * inv_re, 0.0)
    if side == "left":
        return np.where(x < 0, -nu.m * inv_re, 0.0)
    raise DomainError(f"unknown side {side!r}")


def cos_weights(nu: DiscreteCharge, side: Literal["right", "left"]) -> np.ndarray:
    """Per-atom ``m cos^+(arg z)`` or ``m cos^-(arg z)``."""
    rho = nu.moduli
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.where(rho > 0, nu.z.real / rho, 1.0)
    if side == "right":
        return nu.m * np.maximum(c, 0.0)
    if side == "left":
        return nu.m * np.maximum(-c, 0.0)
    raise DomainError(f"unknown side {side!r}")


def _require_positive(nu: DiscreteCharge, what: str = "submeasure") -> None:
    if np.any(nu.m < 0):
        raise DomainError(f"the {what} is defined for positive measures only")


def log_interval(nu: DiscreteCharge, side: Side, r: float, R: float) -> float:
    """Right/left logarithmic interval function (or submeasure) on ``(r, R]``."""
    _check_interval(r, R)
    if side == "sub":
        _require_positive(nu)
        return max(log_interval(nu, "right", r, R), log_interval(nu, "left", r, R))
    w = side_weights(nu, side)
    rho = nu.moduli
    sel = (rho > r) & (rho <= R)
    return math.fsum(w[sel].tolist())


def oriented_log_interval(nu: DiscreteCharge, side: Side, a: float, b: float) -> float:
    """``l(a, b)`` with the convention ``l(a, b) = -l(b, a)`` when ``b < a``."""
    if a == b:
        return 0.0
    if b < a:
        return -log_interval(nu, side, b, a)
    return log_interval(nu, side, a, b)


def breve_log_interval(nu: DiscreteCharge, side: Side, r: float, R: float) -> float:
    """``integral_r^R nu(t; cos^+-) / t^2 dt``, exact for atoms.

    The counting function is a step function, so each atom of modulus ``rho``
    contributes ``m cos^+-(arg z) (1/max(r, rho) - 1/R)`` when ``rho <= R``.
    """
    _check_interval(r, R)
    if side == "sub":
        _require_positive(nu)
        return max(breve_log_interval(nu, "right", r, R), breve_log_interval(nu, "left", r, R))
    c = cos_weights(nu, side)
    rho = nu.moduli
    sel = (rho <= R) & (c != 0)
    terms = c[sel] * (1.0 / np.maximum(r, rho[sel]) - 1.0 / R)
    return math.fsum(terms.tolist())


def characteristic_log(nu: DiscreteCharge, side: Side, R: float) -> float:
    """``l(0, R]``: the interval function with its left end sent to 0."""
    if nu.has_origin_atom():
        raise PreconditionError("characteristic logarithm needs 0 outside the support")
    if not R > 0:
        raise DomainError("R must be positive")
    if side == "sub":
        _require_positive(nu)
        return max(characteristic_log(nu, "right", R), characteristic_log(nu, "left", R))
    w = side_weights(nu, side)
    return math.fsum(w[nu.moduli <= R].tolist())


# ------------------------------------------------------------------- tables


def _segment_sums(weights: np.ndarray, rho: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Correctly rounded sums of ``weights`` over ``(radii[k], radii[k+1]]``."""
    idx = np.searchsorted(rho, radii, side="right")
    return np.array([math.fsum(weights[idx[k]:idx[k + 1]].tolist())
                     for k in range(len(radii) - 1)])


def interval_matrix(nu: DiscreteCharge, side: Literal["right", "left"], radii) -> np.ndarray:
    """``M[i, j] = l(radii[i], radii[j])`` for ``i < j`` (upper triangle, rest 0)."""
    radii = check_radii(radii)
    seg = _segment_sums(side_weights(nu, side), nu.moduli, radii)
    n = len(radii)
    out = np.zeros((n, n))
    for a in range(n - 1):
        # prefix sums in fsum precision along each row
        acc = []
        for b in range(a + 1, n):
            acc.append(seg[b - 1])
            out[a, b] = math.fsum(acc)
    return out


@dataclass
class LogCharTable:
    """Logarithmic interval functions of one charge over all grid pairs."""

    radii: list
    r_values: list
    R_values: list
    values_right: list
    values_left: list
    values_sub: list | None
    charge_id: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "R", "l_right", "l_left", "l_sub"])
        sub = self.values_sub if self.values_sub is not None else [float("nan")] * len(self.r_values)
        for row in zip(self.r_values, self.R_values, self.values_right, self.values_left, sub):
            w.writerow([fmt(v) for v in row])
        return buf.getvalue()


def log_char_table(nu: DiscreteCharge, radii, charge_id: str = "") -> LogCharTable:
    radii = check_radii(radii)
    i, j = np.triu_indices(len(radii), k=1)
    right = interval_matrix(nu, "right", radii)[i, j]
    left = interval_matrix(nu, "left", radii)[i, j]
    sub = np.maximum(right, left).tolist() if nu.is_positive() or len(nu) == 0 else None
    return LogCharTable(radii.tolist(), radii[i].tolist(), radii[j].tolist(),
                        right.tolist(), left.tolist(), sub, charge_id)


def breve_matrix(nu: DiscreteCharge, side: Literal["right", "left"], radii) -> np.ndarray:
    radii = check_radii(radii)
    c = cos_weights(nu, side)
    rho = nu.moduli
    n = len(radii)
    out = np.zeros((n, n))
    for a in range(n - 1):
        r = radii[a]
        inv = 1.0 / np.maximum(r, rho)
        for b in range(a + 1, n):
            R = radii[b]
            sel = rho <= R
            out[a, b] = math.fsum((c[sel] * (inv[sel] - 1.0 / R)).tolist())
    return out


# ------------------------------------------------------- boundary integral J


@dataclass(frozen=True)
class BoundarySampler:
    """Values ``v(iy)`` of a function on the imaginary axis.

    ``func`` takes a NumPy array of real ``y`` and returns ``v(iy)``; it may
    return ``-inf`` at the ``singularities``.
    """

    func: Callable[[np.ndarray], np.ndarray]
    singularities: tuple = ()
    growth: float | None = None
    name: str = ""

    def __call__(self, y):
        return self.func(np.asarray(y, dtype=float))


def j_integral(v: BoundarySampler, r: float, R: float, tol: float = 1e-10,
               floor: float = -1e6, max_panels: int = 20000) -> QuadResult:
    """``(1/2pi) integral_r^R (v(-iy) + v(iy)) / y^2 dy`` by adaptive GK15."""
    _check_interval(r, R)
    hints = sorted({abs(float(s)) for s in v.singularities if r < abs(float(s)) < R})

    def integrand(y):
        return (v(-y) + v(y)) / (2.0 * math.pi * y * y)

    return gk15_adaptive(integrand, r, R, tol, breakpoints=hints, floor=floor,
                         min_width=1e-9 * R, max_panels=max_panels)


def j_segments(v: BoundarySampler, radii, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """J over consecutive grid cells; sums give J on any grid pair."""
    radii = check_radii(radii)
    share = tol / (len(radii) - 1)
    vals, errs = [], []
    for a, b in zip(radii[:-1], radii[1:]):
        q = j_integral(v, float(a), float(b), share)
        vals.append(q.value)
        errs.append(q.error)
    return np.array(vals), np.array(errs)


# -------------------------------------------------------------- domination


def _excess_report(nu, mu, radii, slope_tol, kind) -> DominationReport:
    _require_positive(nu, "log-domination relation")
    _require_positive(mu, "log-domination relation")
    radii = check_radii(radii)
    i, j = np.triu_indices(len(radii), k=1)
    ln = np.maximum(interval_matrix(nu, "right", radii), interval_matrix(nu, "left", radii))
    lm = np.maximum(interval_matrix(mu, "right", radii), interval_matrix(mu, "left", radii))
    ex = (ln - lm)[i, j]
    per_R = np.zeros(len(radii))
    for b in range(1, len(radii)):
        per_R[b] = np.max(ex[j == b])
    per_R[0] = 0.0
    profile = running_max(per_R)
    tr = decade_trend(radii, profile)
    return DominationReport(radii.tolist(), radii[i].tolist(), radii[j].tolist(), ex.tolist(),
                            profile.tolist(), float(np.max(ex)), tr.slope,
                            judge(tr, slope_tol), slope_tol, kind)


def dominates(nu: DiscreteCharge, mu: DiscreteCharge, radii,
              slope_tol: float = DEFAULT_SLOPE_TOL) -> DominationReport:
    """Excess ``l_nu(r, R) - l_mu(r, R)`` over all grid pairs and its trend verdict."""
    return _excess_report(nu, mu, radii, slope_tol, "dominates")


def sequence_criterion(nu: DiscreteCharge, mu: DiscreteCharge, ratio_bound: float,
                       n_max: int, r0: float = 1.0,
                       slope_tol: float = DEFAULT_SLOPE_TOL) -> DominationReport:
    """Running ``sup_{n <= N} (l_nu(r_n, r_N) - l_mu(r_n, r_N))`` for ``r_n = r0 q^n``."""
    if not ratio_bound > 1:
        raise DomainError("ratio_bound must exceed 1")
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    radii = r0 * ratio_bound ** np.arange(n_max + 1, dtype=float)
    return _excess_report(nu, mu, radii, slope_tol, "sequence")


@dataclass
class JllReport:
    """Differences between J and the logarithmic characteristics of a measure."""

    r_values: list
    R_values: list
    j_values: list
    j_errors: list
    diff_right: list
    diff_left: list
    diff_sub: list
    sup_abs: dict
    slopes: dict
    verdict: str
    slope_tol: float

    def to_dict(self) -> dict:
        return asdict(self)


def jll_compare(M: BoundarySampler, mu: DiscreteCharge, radii, tol: float = 1e-8,
                slope_tol: float = DEFAULT_SLOPE_TOL,
                l_override: dict | None = None) -> JllReport:
    """Compare ``J(r, R; M)`` with ``l^r_mu``, ``l^l_mu`` and ``l_mu`` on all grid pairs.

    ``l_override`` may supply analytic values ``{"right": f, "left": g}`` with
    ``f(r, R)`` callables in place of the atom sums (used for closed-form
    fixtures that are not atomic).
    """
    _require_positive(mu, "comparison measure")
    radii = check_radii(radii)
    seg, segerr = j_segments(M, radii, tol)
    i, j = np.triu_indices(len(radii), k=1)
    jv = np.array([math.fsum(seg[a:b].tolist()) for a, b in zip(i, j)])
    je = np.array([float(np.sum(segerr[a:b])) for a, b in zip(i, j)])
    if l_override is None:
        lr = interval_matrix(mu, "right", radii)[i, j]
        ll = interval_matrix(mu, "left", radii)[i, j]
    else:
        lr = np.array([l_override["right"](radii[a], radii[b]) for a, b in zip(i, j)])
        ll = np.array([l_override["left"](radii[a], radii[b]) for a, b in zip(i, j)])
    lm = np.maximum(lr, ll)
    diffs = {"right": jv - lr, "left": jv - ll, "sub": jv - lm}
    sup_abs, slopes = {}, {}
    verdicts = []
    for key, d in diffs.items():
        per_R = np.zeros(len(radii))
        for b in range(1, len(radii)):
            per_R[b] = np.max(np.abs(d[j == b]))
        tr = decade_trend(radii, running_max(per_R))
        sup_abs[key] = float(np.max(np.abs(d)))
        slopes[key] = tr.slope
        verdicts.append(judge(tr, slope_tol))
    if "inconclusive" in verdicts:
        verdict = "inconclusive"
    elif all(v == "bounded" for v in verdicts):
        verdict = "bounded"
    else:
        verdict = "diverging"
    return JllReport(radii[i].tolist(), radii[j].tolist(), jv.tolist(), je.tolist(),
                     diffs["right"].tolist(), diffs["left"].tolist(), diffs["sub"].tolist(),
                     sup_abs, slopes, verdict, slope_tol)


def scaling_gap(nu: DiscreteCharge, side: Side, radii: Sequence[float], a: float,
                b: float) -> float:
    """``max |l(r, R) - l(a r, b R)|`` over grid pairs, ``a in (0, 1]``, ``b >= 1``."""
    if not (0 < a <= 1 and b >= 1):
        raise DomainError("need 0 < a <= 1 <= b")
    radii = check_radii(radii)
    gap = 0.0
    for ii, r in enumerate(radii):
        for R in radii[ii + 1:]:
            gap = max(gap, abs(log_interval(nu, side, r, R) - log_interval(nu, side, a * r, b * R)))
    return gap
