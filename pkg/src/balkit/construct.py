"""Constructive measure pipelines built on top of the balayage.

* :func:`compensator_alpha` adds a positive measure on the real axis so that
  the characteristic logarithm of the sum stays within ``[-M, M]``.
* :func:`pr52_pipeline` chains compensators, two-sided balayage and the
  symmetric decomposition ``theta + beta = gamma``.
* :func:`lindelof_equalizer` places point masses at ``+-i 2^n`` so that the
  quarter-turned measure has equal right and left characteristics on every
  dyadic annulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .balayage import BalayageResult, CauchySum, PiecewiseSign, balayage_genus1
from .conditions import lindelof_partials, lindelof_via_logchar
from .errors import DomainError, PreconditionError
from .logchar import dominates, log_interval, side_weights
from .measures import AxisCharge, DiscreteCharge, central, rotate, upper_density
from .reports import DEFAULT_SLOPE_TOL, ConditionReport, check_radii, condition_report, log_grid


@dataclass
class SeparationCheck:
    d_min: float
    separated: bool
    d_threshold: float


def separation_check(nu: DiscreteCharge, d_threshold: float) -> SeparationCheck:
    """Is every atom inside the double angle ``|Re z| >= d |z|``?"""
    if not 0 < d_threshold <= 1:
        raise DomainError("d_threshold must lie in (0, 1]")
    if len(nu) == 0:
        return SeparationCheck(1.0, True, d_threshold)
    rho = nu.moduli
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(rho > 0, np.abs(nu.z.real) / rho, 0.0)
    d_min = float(np.min(d))
    return SeparationCheck(d_min, d_min >= d_threshold, d_threshold)


# ----------------------------------------------------------------- compensator


@dataclass
class CompensatorResult:
    alpha: AxisCharge
    side: str
    jump_radii: list
    a_values: list  # a(t) on [jump_radii[k], jump_radii[k+1]); a_values[0] is a(0)
    M_side: float
    achieved_bound: float
    grid_bound: float
    bound_ok: bool
    density_eta: float | None = None
    density_alpha: float | None = None

    @property
    def charge(self) -> DiscreteCharge:
        return self.alpha.to_charge()

    def a_function(self, t):
        """Evaluate the nondecreasing step function ``a(t)``."""
        t = np.asarray(t, float)
        idx = np.searchsorted(np.asarray(self.jump_radii), t, side="right")
        return np.asarray(self.a_values)[idx]

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "alpha": self.alpha.to_dict(),
            "a_function": [[0.0, self.a_values[0]],
                           *[[r, a] for r, a in zip(self.jump_radii, self.a_values[1:])]],
            "M_side": self.M_side,
            "achieved_bound": self.achieved_bound,
            "grid_bound": self.grid_bound,
            "bound_ok": self.bound_ok,
            "density_eta": self.density_eta,
            "density_alpha": self.density_alpha,
        }


def _char_log_steps(eta: DiscreteCharge, side: str) -> tuple[np.ndarray, np.ndarray]:
    """Distinct atom radii and ``l^side(0, rho_k]`` after each of them."""
    rho = eta.moduli
    w = side_weights(eta, side)
    if rho.size == 0:
        return np.zeros(0), np.zeros(0)
    start = np.flatnonzero(np.concatenate(([True], rho[1:] != rho[:-1])))
    radii = rho[start]
    steps = np.array([math.fsum(w[a:b].tolist())
                      for a, b in zip(start, np.append(start[1:], rho.size))])
    return radii, np.cumsum(steps)


def _max_rise(values: np.ndarray) -> float:
    """``max_{i<j} (v_j - v_i)`` over ``[0, *values]``, never below 0."""
    best, low = 0.0, 0.0
    for v in values:
        best = max(best, v - low)
        low = min(low, v)
    return best


def compensator_alpha(eta: DiscreteCharge, side: Literal["right", "left"] = "right",
                      radii=None) -> CompensatorResult:
    """Positive real-axis measure ``alpha`` with ``|l^side_{eta+alpha}(r, R)| <= 2M``."""
    if side not in ("right", "left"):
        raise DomainError(f"unknown side {side!r}")
    if eta.has_origin_atom():
        raise PreconditionError("compensator needs 0 outside the support")
    jr, L = _char_log_steps(eta, side)
    M = _max_rise(L)
    # suffix maxima, with l(0, s] = 0 for s below the first radius included at index 0
    full = np.concatenate(([0.0], L))
    suffix = np.maximum.accumulate(full[::-1])[::-1]
    a = 0.0 - suffix  # avoids -0.0 in reports
    jumps = np.maximum(suffix[:-1] - suffix[1:], 0.0)
    keep = jumps > 0
    coords = jr[keep] if side == "right" else -jr[keep]
    alpha = AxisCharge("real", coords, jr[keep] * jumps[keep])
    # bound over all (r, R): the compensated characteristic log moves within [min, max]
    comp = L + (suffix[0] - suffix[1:])
    achieved = _max_rise(comp)
    achieved = max(achieved, _max_rise(-comp))
    total = eta + alpha.to_charge()
    grid_bound = 0.0
    if radii is not None:
        radii = check_radii(radii)
        for i, r in enumerate(radii[:-1]):
            for R in radii[i + 1:]:
                grid_bound = max(grid_bound, abs(log_interval(total, side, r, R)))
    res = CompensatorResult(alpha, side, jr.tolist(), a.tolist(), float(M), float(achieved),
                            float(grid_bound), bool(max(achieved, grid_bound) <= 2 * M + 1e-9))
    if radii is not None:
        res.density_eta = upper_density(eta, radii).value
        res.density_alpha = upper_density(alpha.to_charge(), radii).value
    return res


# ------------------------------------------------------------------- pr52


def _split_axis(theta: BalayageResult) -> tuple[AxisCharge, AxisCharge]:
    pos, neg = theta.swept.split()
    kept = theta.kept_atoms
    err = theta.output.smooth_error

    def wrap(part: PiecewiseSign, sel) -> AxisCharge:
        if len(theta.swept) == 0:
            return AxisCharge("imaginary", kept.coords[sel], np.abs(kept.masses[sel]))
        return AxisCharge("imaginary", kept.coords[sel], np.abs(kept.masses[sel]), part.mass,
                          err, part.density,
                          tuple(sorted(set(part.breakpoints()) | set(theta.swept.y0.tolist()))))

    return wrap(pos, kept.masses > 0), wrap(neg, kept.masses < 0)


def _uniform(c: float) -> AxisCharge:
    return AxisCharge("imaginary", smooth=lambda a, b: c * (np.asarray(b) - np.asarray(a)),
                      density=lambda y: c * np.ones_like(np.asarray(y, float)))


def _dense_max(cs: CauchySum, part: PiecewiseSign) -> float:
    if len(cs) == 0:
        return 0.0
    t = np.tan(np.linspace(-1.5, 1.5, 61))
    local = (cs.y0[:, None] + np.abs(cs.x)[:, None] * t[None, :]).ravel()
    lo, hi = cs._window()
    grid = np.concatenate((local, np.linspace(lo, hi, 4001), np.asarray(part.breakpoints())))
    return float(np.max(part.density(grid)))


@dataclass
class Pr52Result:
    alpha: AxisCharge
    alpha_right: CompensatorResult
    alpha_left: CompensatorResult
    theta: BalayageResult
    theta_plus: AxisCharge
    theta_minus: AxisCharge
    beta: AxisCharge
    gamma: AxisCharge
    lindelof: ConditionReport
    diagnostics: dict
    c_uniform: float | None = None
    gamma_prime: AxisCharge | None = None
    beta_prime: AxisCharge | None = None
    warnings: list = field(default_factory=list)

    def scorecard(self) -> list[tuple[str, float, float, bool]]:
        d = self.diagnostics
        rows = [("asg_residual", d["asg_residual"], d["tol"], d["asg_residual"] <= d["tol"]),
                ("gamma_even_residual", d["gamma_even_residual"], d["tol"],
                 d["gamma_even_residual"] <= d["tol"]),
                ("beta_min_mass", d["beta_min_mass"], -d["tol"], d["beta_min_mass"] >= -d["tol"]),
                ("compensator_right", self.alpha_right.achieved_bound,
                 2 * self.alpha_right.M_side, self.alpha_right.bound_ok),
                ("compensator_left", self.alpha_left.achieved_bound,
                 2 * self.alpha_left.M_side, self.alpha_left.bound_ok),
                ("lindelof_slope", self.lindelof.slope, self.lindelof.slope_tol,
                 self.lindelof.verdict != "fails")]
        if self.c_uniform is not None:
            rows.append(("beta_prime_min_mass", d["beta_prime_min_mass"], -d["tol"],
                         d["beta_prime_min_mass"] >= -d["tol"]))
        return rows

    def to_dict(self) -> dict:
        ords = np.asarray(self.diagnostics.get("ordinates", np.linspace(-10, 10, 21)))
        out = {
            "alpha": self.alpha.to_dict(),
            "alpha_right": self.alpha_right.to_dict(),
            "alpha_left": self.alpha_left.to_dict(),
            "theta": self.theta.output.to_dict(ords),
            "beta": self.beta.to_dict(ords),
            "gamma": self.gamma.to_dict(ords),
            "lindelof": self.lindelof.to_dict(),
            "c_uniform": self.c_uniform,
            "diagnostics": {k: v for k, v in self.diagnostics.items() if k != "ordinates"},
            "scorecard": [list(r) for r in self.scorecard()],
            "warnings": list(self.warnings),
        }
        if self.beta_prime is not None:
            out["beta_prime"] = self.beta_prime.to_dict(ords)
        return out


def _probe_intervals(span: float, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    ends = np.sort(rng.uniform(-span, span, size=(n, 2)), axis=1)
    return ends[:, 0], ends[:, 1]


def _unit_window_sup(ac: AxisCharge, limit: float) -> float:
    starts = np.arange(-math.ceil(limit), math.ceil(limit), dtype=float)
    return float(np.max(np.abs(ac.mass(starts, starts + 1.0))))


def pr52_pipeline(nu: DiscreteCharge, mu: DiscreteCharge, radii=None,
                  uniform_gamma: bool = False, d_threshold: float = 0.1,
                  probes: int = 100, tol: float = 1e-9, seed: int = 0,
                  slope_tol: float = DEFAULT_SLOPE_TOL) -> Pr52Result:
    """Compensate, sweep and split ``nu - mu`` into ``theta + beta = gamma``."""
    for name, c in (("nu", nu), ("mu", mu)):
        if not (c.is_positive() or len(c) == 0):
            raise DomainError(f"{name} must be a positive measure")
        if c.has_origin_atom():
            raise PreconditionError(f"{name} has an atom at the origin")
    radii = log_grid(1.0, 1e4, 4) if radii is None else check_radii(radii)
    warnings = []
    if dominates(nu, mu, radii).verdict == "diverging":
        warnings.append("nu does not appear to be log-dominated by mu on the grid")
    eta = nu - mu
    a_r = compensator_alpha(eta, "right", radii)
    a_l = compensator_alpha(eta + a_r.charge, "left", radii)
    alpha = a_r.alpha + a_l.alpha
    source = eta + alpha.to_charge()
    theta = balayage_genus1(source, "two_sided")
    t_plus, t_minus = _split_axis(theta)
    beta = t_minus + t_plus.reflect()
    gamma = t_plus + t_plus.reflect()

    span = 2.0 * (1.0 + float(np.max(source.moduli)) if len(source) else 1.0)
    a, b = _probe_intervals(span, probes, seed)
    th, be, ga = theta.output.mass(a, b), beta.mass(a, b), gamma.mass(a, b)
    diag = {
        "tol": tol,
        "asg_residual": float(np.max(np.abs(th + be - ga) / (1.0 + np.abs(ga)))),
        "gamma_even_residual": float(np.max(np.abs(ga - gamma.mass(-b, -a)) / (1.0 + np.abs(ga)))),
        "beta_min_mass": float(np.min(be)),
        "split_residual": float(np.max(np.abs(t_plus.mass(a, b) - t_minus.mass(a, b) - th))),
        "probe_span": span,
        "ordinates": np.linspace(-span, span, 21).tolist(),
    }
    # partial sums of nu + alpha + beta - mu: beta at iy adds -i/y, and its 1/y moment
    # over symmetric sets equals minus that of theta because gamma is even
    s = lindelof_partials(source, radii)
    kept = theta.kept_atoms
    for k, r in enumerate(radii):
        if r <= 1:
            continue
        mom = theta.swept.inverse_moment(1.0, r) + theta.swept.inverse_moment(-r, -1.0)
        sel = (np.abs(kept.coords) > 1) & (np.abs(kept.coords) <= r)
        mom += math.fsum((kept.masses[sel] / kept.coords[sel]).tolist())
        s[k] += 1j * mom
    lind = condition_report("lindelof.pr52", radii, s, slope_tol, magnitudes=np.abs(s))
    res = Pr52Result(alpha, a_r, a_l, theta, t_plus, t_minus, beta, gamma, lind, diag,
                     warnings=warnings)
    if uniform_gamma:
        for name, c in (("nu", nu), ("mu", mu)):
            if not separation_check(c, d_threshold).separated:
                warnings.append(f"{name} is not angle-separated at d={d_threshold}")
        if kept.coords.size:
            warnings.append("theta has axis atoms; a uniform gamma cannot dominate them")
        else:
            pos, _ = theta.swept.split()
            c_val = 2.0 * _dense_max(theta.swept, pos) * (1.0 + 1e-3)
            g_prime = _uniform(c_val)
            b_prime = beta + g_prime - gamma
            bp = b_prime.mass(a, b)
            diag["beta_prime_min_mass"] = float(np.min(bp))
            diag["gamma_prime_residual"] = float(np.max(np.abs(g_prime.mass(a, b) - c_val * (b - a))))
            diag["beta_prime_unit_window_sup"] = _unit_window_sup(b_prime, span)
            res.c_uniform, res.gamma_prime, res.beta_prime = c_val, g_prime, b_prime
    return res


# --------------------------------------------------------------- equalizer


@dataclass
class EqualizerResult:
    beta: AxisCharge
    b_right: list
    b_left: list
    annulus_values: list
    residual: float
    mus_residual: float
    lindelof: ConditionReport | None
    even_alternative: DiscreteCharge | None = None
    even_lindelof: ConditionReport | None = None
    warnings: list = field(default_factory=list)

    @property
    def charge(self) -> DiscreteCharge:
        return self.beta.to_charge()

    def to_dict(self) -> dict:
        out = {
            "beta": self.beta.to_dict(),
            "b_right": self.b_right,
            "b_left": self.b_left,
            "annulus_values": self.annulus_values,
            "residual": self.residual,
            "mus_residual": self.mus_residual,
            "lindelof": None if self.lindelof is None else self.lindelof.to_dict(),
            "warnings": list(self.warnings),
        }
        if self.even_lindelof is not None:
            out["even_lindelof"] = self.even_lindelof.to_dict()
        return out


def lindelof_equalizer(mu: DiscreteCharge, n_max: int | None = None, radii=None,
                       slope_tol: float = DEFAULT_SLOPE_TOL) -> EqualizerResult:
    """Axis masses that equalize the quarter-turned characteristics on dyadic annuli.

    With ``l^r_n``, ``l^l_n`` the characteristics of ``mu`` turned by ``pi/2`` on
    ``(2^(n-1), 2^n]``, a mass ``2^n (l^l_n - l^r_n)^+`` sits at ``-i 2^n`` and
    ``2^n (l^r_n - l^l_n)^+`` at ``+i 2^n``.  Under the quarter turn these land
    on ``+2^n`` and ``-2^n`` respectively, raising the smaller side to the larger.
    """
    if not (mu.is_positive() or len(mu) == 0):
        raise DomainError("the equalizer needs a positive measure")
    if mu.has_origin_atom():
        raise PreconditionError("the equalizer needs 0 outside the support")
    if n_max is None:
        top = float(np.max(mu.moduli)) if len(mu) else 1.0
        n_max = max(1, int(math.ceil(math.log2(max(top, 2.0)))))
    turned = rotate(mu, math.pi / 2)
    coords, masses, b_r, b_l, vals = [], [], [], [], []
    for n in range(1, n_max + 1):
        lo, hi = 2.0 ** (n - 1), 2.0 ** n
        lr = log_interval(turned, "right", lo, hi)
        ll = log_interval(turned, "left", lo, hi)
        br, bl = hi * max(ll - lr, 0.0), hi * max(lr - ll, 0.0)
        b_r.append(br)
        b_l.append(bl)
        vals.append(max(lr, ll))
        if br > 0:
            coords.append(-hi)
            masses.append(br)
        if bl > 0:
            coords.append(hi)
            masses.append(bl)
    beta = AxisCharge("imaginary", coords, masses)
    total = mu + beta.to_charge()
    total_turned = rotate(total, math.pi / 2)
    residual = 0.0
    for n, v in zip(range(1, n_max + 1), vals):
        lo, hi = 2.0 ** (n - 1), 2.0 ** n
        for side in ("right", "left"):
            residual = max(residual, abs(log_interval(total_turned, side, lo, hi) - v))
    grid = log_grid(1.0, 1e4, 4) if radii is None else check_radii(radii)
    mus = 0.0
    for i, r in enumerate(grid[:-1]):
        for R in grid[i + 1:]:
            for side in ("right", "left"):
                mus = max(mus, abs(log_interval(total, side, r, R) - log_interval(mu, side, r, R)))
    lind = lindelof_via_logchar(total, grid, slope_tol)
    res = EqualizerResult(beta, b_r, b_l, vals, residual, mus, lind)
    x = mu.z.real
    if len(mu) and (np.all(x >= 0) or np.all(x <= 0)):
        even = mu + central(mu)
        res.even_alternative = even
        res.even_lindelof = lindelof_via_logchar(even, grid, slope_tol)
    return res
