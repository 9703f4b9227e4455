"""Balayage of discrete charges onto the imaginary axis.

A point mass at ``z = x + i y0`` off the axis is swept into the Cauchy
density ``|x| / (pi ((y - y0)^2 + x^2))``; the genus-1 kernel subtracts the
constant ``|Re(1/z)| / pi`` from it.  Interval masses, densities, the
``1/y`` moment and the variation split therefore all have closed forms,
implemented by :class:`CauchySum`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, PreconditionError
from .measures import AxisCharge, DiscreteCharge, axis_distribution, symmetrize
from .reports import (DEFAULT_SLOPE_TOL, ConditionReport, check_radii, condition_report,
                      log_grid)

MIN_MODULUS = 1e-9
Mode = Literal["right", "left", "two_sided"]
Boundary = Literal["outer", "inner"]

_CHUNK = 1 << 22


def _as_point(z) -> tuple[float, float]:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("point must be finite")
    return z.real, z.imag


def harmonic_measure(z, y1: float, y2: float) -> float:
    """Harmonic measure of ``i(y1, y2]`` at ``z`` for the complement of the axis."""
    if not y1 < y2:
        raise DomainError("need y1 < y2")
    x, y0 = _as_point(z)
    if x == 0:
        if y1 < y0 < y2:
            raise DomainError("z lies inside the segment; use the atom rule")
        return 0.0
    ax = abs(x)
    return (math.atan((y2 - y0) / ax) - math.atan((y1 - y0) / ax)) / math.pi


def harmonic_charge_genus1(z, y1: float, y2: float) -> float:
    """Genus-1 harmonic charge: ``omega - (y2 - y1) |Re(1/z)| / pi``."""
    x, y0 = _as_point(z)
    if x == 0 and y0 == 0:
        raise DomainError("the genus-1 kernel is undefined at 0")
    w = harmonic_measure(z, y1, y2)
    return w - (y2 - y1) / math.pi * abs(x) / (x * x + y0 * y0)


@dataclass(frozen=True)
class CauchySum:
    """``sum_k m_k (Cauchy(y0_k, |x_k|) - c_k)`` as a charge on the axis.

    ``c_k`` is the per-atom constant density removed by the genus-1 kernel
    (zero for atoms swept with the plain harmonic measure).
    """

    x: np.ndarray
    y0: np.ndarray
    m: np.ndarray
    c: np.ndarray

    @classmethod
    def empty(cls) -> "CauchySum":
        z = np.zeros(0)
        return cls(z, z, z, z)

    def __len__(self) -> int:
        return len(self.m)

    @property
    def tail_density(self) -> float:
        return -math.fsum((self.m * self.c).tolist())

    def _blocks(self, npts: int):
        step = max(1, _CHUNK // max(npts, 1))
        for s in range(0, len(self.m), step):
            yield slice(s, s + step)

    def mass(self, a, b):
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        shape = np.broadcast(a, b).shape
        a1 = np.broadcast_to(a, shape).ravel()
        b1 = np.broadcast_to(b, shape).ravel()
        out = np.zeros(a1.shape)
        for sl in self._blocks(a1.size):
            ax = np.abs(self.x[sl])[:, None]
            y0 = self.y0[sl][:, None]
            ang = np.arctan2(b1 - y0, ax) - np.arctan2(a1 - y0, ax)
            c = self.c[sl][:, None]
            with np.errstate(invalid="ignore"):
                # infinite ends carry no constant part for genus-0 atoms
                k = ang / math.pi - np.where(c == 0.0, 0.0, c * (b1 - a1))
            out += self.m[sl] @ k
        return out.reshape(shape) if shape else float(out[0])

    def density(self, y):
        y = np.asarray(y, float)
        y1 = np.atleast_1d(y).ravel()
        out = np.zeros(y1.shape)
        for sl in self._blocks(y1.size):
            ax = np.abs(self.x[sl])[:, None]
            d = (y1 - self.y0[sl][:, None])
            k = ax / (math.pi * (d * d + ax * ax)) - self.c[sl][:, None]
            out += self.m[sl] @ k
        return out.reshape(y.shape) if y.ndim else float(out[0])

    def inverse_moment(self, a: float, b: float) -> float:
        """``integral_a^b density(y) / y dy`` for ``0 < a < b`` or ``a < b < 0``."""
        if a * b <= 0 or not a < b:
            raise DomainError("interval must avoid 0")
        if len(self) == 0:
            return 0.0
        ax = np.abs(self.x)
        y0 = self.y0
        A = 1.0 / (ax * ax + y0 * y0)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            # the arctangent part times |x|/pi stays finite as |x| -> 0
            logs = math.log(b / a) - (np.log(np.hypot(b - y0, ax)) - np.log(np.hypot(a - y0, ax)))
            logs = np.where(ax > 0, ax * A / math.pi * logs, 0.0)
            turn = np.arctan2(b - y0, ax) - np.arctan2(a - y0, ax)
        bumps = logs + A * y0 / math.pi * turn
        const = self.c * math.log(b / a)
        return math.fsum((self.m * (bumps - const)).tolist())

    def __add__(self, other: "CauchySum") -> "CauchySum":
        return CauchySum(*(np.concatenate((getattr(self, f), getattr(other, f)))
                           for f in ("x", "y0", "m", "c")))

    def scale(self, k: float) -> "CauchySum":
        return CauchySum(self.x, self.y0, k * self.m, self.c)

    # ------------------------------------------------------ sign structure

    def _window(self) -> tuple[float, float]:
        if len(self) == 0:
            return -1.0, 1.0
        spread = float(np.max(np.abs(self.x))) + 1.0
        lo = float(np.min(self.y0)) - 1e3 * spread
        hi = float(np.max(self.y0)) + 1e3 * spread
        tail = self.tail_density
        if tail != 0.0:
            reach = math.sqrt(float(np.sum(np.abs(self.m * self.x))) / (math.pi * abs(tail)))
            lo = min(lo, float(np.min(self.y0)) - 4 * reach)
            hi = max(hi, float(np.max(self.y0)) + 4 * reach)
        return lo, hi

    def sign_changes(self, per_atom: int = 48, uniform: int = 4000) -> np.ndarray:
        """Roots of the density, located on a fine grid and polished by brentq."""
        if len(self) == 0:
            return np.zeros(0)
        lo, hi = self._window()
        t = np.tan(np.linspace(-0.5 * math.pi, 0.5 * math.pi, per_atom + 2)[1:-1])
        local = (self.y0[:, None] + np.abs(self.x)[:, None] * t[None, :]).ravel()
        logs = np.geomspace(1e-3, max(abs(lo), abs(hi)), 400)
        grid = np.unique(np.concatenate((np.linspace(lo, hi, uniform), local, logs, -logs)))
        grid = grid[(grid >= lo) & (grid <= hi)]
        d = self.density(grid)
        roots = []
        f = lambda y: float(np.asarray(self.density(np.array([y])))[0])
        for k in np.flatnonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0):
            a, b = grid[k], grid[k + 1]
            fa, fb = f(a), f(b)
            if fa == 0.0 or fb == 0.0 or fa * fb > 0:
                # rounding flips the sign right at a bracket end; the end is the root
                roots.append(a if abs(d[k]) <= abs(d[k + 1]) else b)
                continue
            roots.append(brentq(f, a, b, xtol=1e-14, rtol=1e-15))
        return np.array(roots)

    def split(self) -> tuple["PiecewiseSign", "PiecewiseSign"]:
        """Positive and negative variations as exact interval-mass oracles."""
        roots = self.sign_changes()
        edges = np.concatenate(([-np.inf], roots, [np.inf]))
        signs = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            # the density may touch zero inside a cell, so sign by the largest sample
            if np.isinf(lo) and np.isinf(hi):
                probe = np.concatenate((self.y0, [0.0, 1.0, -1.0, 1e3, -1e3]))
            elif np.isinf(lo):
                probe = hi - np.array([1.0, 10.0, 1e3])
            elif np.isinf(hi):
                probe = lo + np.array([1.0, 10.0, 1e3])
            else:
                probe = lo + (hi - lo) * np.array([0.25, 0.5, 0.75])
            d = np.asarray(self.density(probe))
            signs.append(1 if d[int(np.argmax(np.abs(d)))] > 0 else -1)
        signs = np.array(signs)
        return PiecewiseSign(self, edges, signs == 1, 1.0), PiecewiseSign(self, edges, signs == -1, -1.0)


@dataclass(frozen=True)
class PiecewiseSign:
    """Restriction of a :class:`CauchySum` to the cells where it has one sign."""

    base: CauchySum
    edges: np.ndarray
    active: np.ndarray
    sign: float

    def mass(self, a, b):
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        out = np.zeros(np.broadcast(a, b).shape)
        for lo, hi, on in zip(self.edges[:-1], self.edges[1:], self.active):
            if not on:
                continue
            lo_c = np.clip(a, lo, hi)
            hi_c = np.clip(b, lo, hi)
            ok = hi_c > lo_c
            if np.any(ok):
                part = np.where(ok, self.base.mass(np.where(ok, lo_c, 0.0), np.where(ok, hi_c, 0.0)), 0.0)
                out = out + self.sign * part
        return out if out.ndim else float(out)

    def density(self, y):
        d = self.sign * np.asarray(self.base.density(y))
        return np.maximum(d, 0.0)

    def breakpoints(self) -> tuple:
        return tuple(float(e) for e in self.edges[1:-1])


def axis_from_cauchy(cs: CauchySum, atoms: AxisCharge, error: float = 1e-13) -> AxisCharge:
    if len(cs) == 0:
        return atoms
    return AxisCharge("imaginary", atoms.coords, atoms.masses, cs.mass,
                      error * (1.0 + float(np.sum(np.abs(cs.m)))), cs.density,
                      tuple(sorted(set(cs.y0.tolist()))))


@dataclass
class BalayageResult:
    output: AxisCharge
    kept_atoms: AxisCharge
    genus: str
    kernel_call_count: int
    swept: CauchySum
    unswept: DiscreteCharge
    source: DiscreteCharge
    warnings: list = field(default_factory=list)

    def to_dict(self, ordinates=None) -> dict:
        if ordinates is None:
            ordinates = np.linspace(-10, 10, 21)
        return {
            "genus": self.genus,
            "kernel_call_count": self.kernel_call_count,
            "kept_atoms": self.kept_atoms.to_dict(),
            "swept_atoms": [{"re": float(x), "im": float(y), "mass": float(m), "const": float(c)}
                            for x, y, m, c in zip(self.swept.x, self.swept.y0, self.swept.m,
                                                  self.swept.c)],
            "output": self.output.to_dict(ordinates),
            "unswept": self.unswept.to_dict(),
            "warnings": list(self.warnings),
        }


def _sweep(nu: DiscreteCharge, select: np.ndarray, genus1: np.ndarray) -> CauchySum:
    x = nu.z.real[select]
    y0 = nu.z.imag[select]
    m = nu.m[select]
    ax = np.abs(x)
    c = np.where(genus1[select], ax / (x * x + y0 * y0) / math.pi, 0.0)
    return CauchySum(x.copy(), y0.copy(), m.copy(), c)


def balayage_genus0(nu: DiscreteCharge, radii=None) -> BalayageResult:
    """Classical balayage of off-axis mass from both half-planes onto the axis."""
    from .conditions import blaschke_classical

    warnings = []
    radii = log_grid(1.0, 1e4, 4) if radii is None else radii
    for side in ("right", "left"):
        rep = blaschke_classical(nu, side, radii)
        if rep.verdict == "fails":
            warnings.append(f"classical Blaschke condition fails on the {side} side")
    off = nu.z.real != 0
    cs = _sweep(nu, off, np.zeros(len(nu), bool))
    kept = axis_distribution(nu, "imaginary")
    return BalayageResult(axis_from_cauchy(cs, kept), kept, "zero", len(cs), cs,
                          DiscreteCharge.empty(), nu, warnings)


def balayage_genus1(nu: DiscreteCharge, mode: Mode = "two_sided",
                    boundary: Boundary = "outer") -> BalayageResult:
    """Genus-1 balayage from one or both half-planes onto the imaginary axis.

    Atoms in the open unit disc use the harmonic measure and the remaining
    ones the genus-1 harmonic charge.  Atoms on the unit circle go to the
    genus-1 branch when ``boundary == "outer"``.  Atoms already on the axis are
    kept as they are.  For one-sided modes the atoms of the other half-plane
    are returned untouched in ``unswept``.
    """
    if mode not in ("right", "left", "two_sided"):
        raise DomainError(f"unknown mode {mode!r}")
    if boundary not in ("outer", "inner"):
        raise DomainError(f"unknown boundary rule {boundary!r}")
    if len(nu) and float(np.min(nu.moduli)) < MIN_MODULUS:
        raise PreconditionError(f"genus-1 balayage needs all atoms at |z| >= {MIN_MODULUS}")
    x = nu.z.real
    if mode == "right":
        sel, rest = x > 0, x < 0
    elif mode == "left":
        sel, rest = x < 0, x > 0
    else:
        sel, rest = x != 0, np.zeros(len(nu), bool)
    rho = nu.moduli
    genus1 = rho >= 1.0 if boundary == "outer" else rho > 1.0
    cs = _sweep(nu, sel, genus1)
    kept = axis_distribution(nu, "imaginary")
    genus = {"right": "one_right", "left": "one_left", "two_sided": "one_two_sided"}[mode]
    return BalayageResult(axis_from_cauchy(cs, kept), kept, genus, len(cs), cs,
                          nu.restrict(rest), nu)


def two_sided_via_symmetrization(nu: DiscreteCharge, boundary: Boundary = "outer") -> AxisCharge:
    """Second evaluation path for the two-sided balayage.

    The right balayage of the symmetrized charge carries half of the swept
    mass plus the full axis part, hence ``2 * right - axis``.
    """
    sym = symmetrize(nu, "iR_symmetrization")
    right = balayage_genus1(sym, "right", boundary).output
    return right.scale(2.0) - axis_distribution(nu, "imaginary")


def total_variation_radial(result: BalayageResult, radii) -> np.ndarray:
    """``|nu^Bal|((-r, r])`` for each radius."""
    radii = np.asarray(radii, float)
    pos, neg = result.swept.split()
    sm = np.asarray(pos.mass(-radii, radii)) + np.asarray(neg.mass(-radii, radii))
    kept = result.kept_atoms
    sel = np.abs(kept.coords)[:, None] <= radii[None, :]
    atoms = np.abs(kept.masses) @ sel if kept.coords.size else np.zeros_like(radii)
    return sm + atoms


def lindelof_remainder(result: BalayageResult, radii) -> np.ndarray:
    """Partial sums ``S(r)`` of ``source - output`` over ``1 < |z| <= r``."""
    from .conditions import lindelof_partials

    radii = check_radii(radii)
    s_src = lindelof_partials(result.source, radii)
    s_out = lindelof_partials(result.kept_atoms.to_charge(), radii)
    smooth = np.zeros(len(radii), complex)
    for k, r in enumerate(radii):
        if r > 1:
            # a mass at iy contributes 1/(iy) = -i/y
            mom = result.swept.inverse_moment(1.0, r) + result.swept.inverse_moment(-r, -1.0)
            smooth[k] = -1j * mom
        elif r < 1:
            mom = result.swept.inverse_moment(r, 1.0) + result.swept.inverse_moment(-1.0, -r)
            smooth[k] = 1j * mom
    return s_src - s_out - smooth


def balayage_growth_report(result: BalayageResult, radii, small_radii=None,
                           window_limit: float | None = None,
                           slope_tol: float = DEFAULT_SLOPE_TOL) -> ConditionReport:
    """Growth profiles of the swept charge.

    ``partials`` hold ``|nu^Bal|^rad(r) / (r ln r)`` at grid radii above ``e``;
    ``extra`` carries the small-radius ratio ``/r^2``, the unit-window density
    sup and the Lindelof remainder profile of ``nu - nu^Bal``.
    """
    radii = check_radii(radii)
    big = radii[radii > math.e]
    if big.size < 2:
        raise DomainError("growth report needs radii above e")
    tv = total_variation_radial(result, big)
    ratio = tv / (big * np.log(big))
    extra = {}
    if not result.source.has_origin_atom():
        small = np.geomspace(1e-3, 0.1, 9) if small_radii is None else np.asarray(small_radii)
        extra["small_radii"] = small.tolist()
        extra["small_ratio"] = (total_variation_radial(result, small) / small ** 2).tolist()
    lim = float(big[-1] if window_limit is None else window_limit)
    starts = np.arange(-math.ceil(lim), math.ceil(lim))
    pos, neg = result.swept.split()
    win = np.asarray(pos.mass(starts, starts + 1.0)) + np.asarray(neg.mass(starts, starts + 1.0))
    extra["unit_window_sup"] = float(np.max(win)) if win.size else 0.0
    lind = lindelof_remainder(result, big)
    extra["lindelof_remainder_abs"] = np.abs(lind).tolist()
    lrep = condition_report("lindelof.remainder", big, np.abs(lind), slope_tol)
    extra["lindelof_remainder_verdict"] = lrep.verdict
    return condition_report("balayage.growth", big, ratio, slope_tol, extra=extra)
