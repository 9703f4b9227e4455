"""Blaschke and Lindelof conditions as range-qualified grid reports.

Partial values are taken over ``1 < |z| <= r`` for each grid radius ``r``;
for ``r < 1`` the oriented convention ``l(1, r) = -l(r, 1)`` applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .logchar import interval_matrix, side_weights
from .measures import DiscreteCharge, rotate, variations
from .reports import (DEFAULT_SLOPE_TOL, ConditionReport, check_radii, condition_report,
                      decade_trend, judge, running_max)


def _oriented_partials(values: np.ndarray, rho: np.ndarray, radii: np.ndarray,
                       base: float = 1.0) -> np.ndarray:
    out = np.empty(len(radii), dtype=values.dtype)
    for k, r in enumerate(radii):
        lo, hi, sign = (base, r, 1.0) if r >= base else (r, base, -1.0)
        sel = (rho > lo) & (rho <= hi)
        if np.iscomplexobj(values):
            v = values[sel]
            out[k] = sign * complex(math.fsum(v.real.tolist()), math.fsum(v.imag.tolist()))
        else:
            out[k] = sign * math.fsum(values[sel].tolist())
    return out


def blaschke_partials(nu: DiscreteCharge, side: str, radii) -> np.ndarray:
    """``l^side_nu(1, r)`` for every grid radius."""
    radii = check_radii(radii)
    return _oriented_partials(side_weights(nu, side), nu.moduli, radii)


def blaschke_classical(nu: DiscreteCharge, side: str, radii,
                       slope_tol: float = DEFAULT_SLOPE_TOL) -> ConditionReport:
    total = variations(nu)[2]
    return condition_report(f"blaschke.classical.{side}", check_radii(radii),
                            blaschke_partials(total, side, radii), slope_tol)


def blaschke_genus1(nu: DiscreteCharge, side: str, radii,
                    slope_tol: float = DEFAULT_SLOPE_TOL) -> ConditionReport:
    return condition_report(f"blaschke.genus1.{side}", check_radii(radii),
                            blaschke_partials(nu, side, radii), slope_tol)


def blaschke_two_sided(nu: DiscreteCharge, radii,
                       slope_tol: float = DEFAULT_SLOPE_TOL) -> ConditionReport:
    p = blaschke_partials(nu, "right", radii) + blaschke_partials(nu, "left", radii)
    return condition_report("blaschke.two_sided", check_radii(radii), p, slope_tol)


def lindelof_partials(nu: DiscreteCharge, radii) -> np.ndarray:
    """Complex partial sums ``S(r) = sum_{1 < |z| <= r} m / z``."""
    radii = check_radii(radii)
    if nu.has_origin_atom():
        nu = nu.restrict(nu.moduli > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = nu.m / nu.z if len(nu) else np.zeros(0, complex)
    return _oriented_partials(np.asarray(terms, complex), nu.moduli, radii)


def lindelof_genus1(nu: DiscreteCharge, radii,
                    slope_tol: float = DEFAULT_SLOPE_TOL) -> ConditionReport:
    s = lindelof_partials(nu, radii)
    return condition_report("lindelof.genus1", check_radii(radii), s, slope_tol,
                            magnitudes=np.abs(s))


def lindelof_real(nu: DiscreteCharge, radii,
                  slope_tol: float = DEFAULT_SLOPE_TOL) -> ConditionReport:
    """Real-part partials, equal to ``l^r(1, r) - l^l(1, r)``."""
    p = blaschke_partials(nu, "right", radii) - blaschke_partials(nu, "left", radii)
    return condition_report("lindelof.re", check_radii(radii), p, slope_tol)


def lindelof_im(nu: DiscreteCharge, radii,
                slope_tol: float = DEFAULT_SLOPE_TOL) -> ConditionReport:
    return condition_report("lindelof.im", check_radii(radii),
                            lindelof_partials(nu, radii).imag, slope_tol)


@dataclass
class RelationCheck:
    """Lindelof verdict next to the verdicts of its real and imaginary parts."""

    genus1: str
    real_part: str
    imag_part: str
    rotated_gap: float  # max |Im S(r) - (l^r - l^l)(1, r) of the quarter-turned charge|
    consistent: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def lindelof_relation(nu: DiscreteCharge, radii,
                      slope_tol: float = DEFAULT_SLOPE_TOL) -> RelationCheck:
    """Check that the Lindelof verdict is the conjunction of its two parts."""
    g = lindelof_genus1(nu, radii, slope_tol)
    re = lindelof_real(nu, radii, slope_tol)
    im = lindelof_im(nu, radii, slope_tol)
    turned = rotate(nu, math.pi / 2)
    rot = blaschke_partials(turned, "right", radii) - blaschke_partials(turned, "left", radii)
    gap = float(np.max(np.abs(rot - np.asarray(im.partials)))) if len(radii) else 0.0
    both = re.holds() and im.holds()
    consistent = g.holds() == both or "inconclusive" in (g.verdict, re.verdict, im.verdict)
    return RelationCheck(g.verdict, re.verdict, im.verdict, gap, consistent)


def lindelof_via_logchar(mu: DiscreteCharge, radii,
                         slope_tol: float = DEFAULT_SLOPE_TOL) -> ConditionReport:
    """Four window profiles whose joint boundedness is the Lindelof condition.

    For ``mu`` and for ``mu`` turned by a quarter counterclockwise, the
    profiles are ``|l^r - l^l|(r, R)`` and ``|l^r - l|(r, R)`` over all grid
    pairs ``r < R``, turned into running sups indexed by ``R``.
    """
    if not (mu.is_positive() or len(mu) == 0):
        raise DomainError("lindelof_via_logchar needs a positive measure")
    radii = check_radii(radii)
    i, j = np.triu_indices(len(radii), k=1)
    profiles, slopes, verdicts = {}, {}, []
    for label, charge in (("mu", mu), ("mu_rot", rotate(mu, math.pi / 2))):
        lr = interval_matrix(charge, "right", radii)
        ll = interval_matrix(charge, "left", radii)
        lm = np.maximum(lr, ll)
        for name, d in (("rl", np.abs(lr - ll)), ("rm", np.abs(lr - lm))):
            per_R = np.zeros(len(radii))
            for b in range(1, len(radii)):
                per_R[b] = np.max(d[i[j == b], b])
            prof = running_max(per_R)
            tr = decade_trend(radii, prof)
            key = f"{label}.{name}"
            profiles[key] = prof.tolist()
            slopes[key] = tr.slope
            verdicts.append(judge(tr, slope_tol))
    combined = np.max(np.array([profiles[k] for k in profiles]), axis=0)
    if "inconclusive" in verdicts:
        verdict = "inconclusive"
    elif all(v == "bounded" for v in verdicts):
        verdict = "holds_on_range"
    else:
        verdict = "fails"
    return ConditionReport("lindelof.logchar", radii.tolist(), combined.tolist(),
                           running_max(combined).tolist(), max(slopes.values()), verdict,
                           slope_tol, {"profiles": profiles, "slopes": slopes})
