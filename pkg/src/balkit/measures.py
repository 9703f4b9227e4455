"""Discrete charges in the plane and charges living on one coordinate axis.

A charge is a finite list of weighted atoms.  Locations are plain Python /
NumPy complex numbers.  Instances are immutable and always kept in canonical
form (coincident atoms merged, zero masses dropped, sorted by modulus, then
argument, then mass) so that equality of charges is decidable atomwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Literal, NamedTuple

import numpy as np

from .errors import DomainError, PreconditionError

Axis = Literal["real", "imaginary"]
SymmetryKind = Literal["central", "mirror", "iR_symmetrization", "even_part", "odd_part"]

HALF_PI = 0.5 * math.pi


def principal_arg(z):
    """Argument of ``z`` in ``[-pi/2, 3pi/2)``; the origin gets argument 0."""
    a = np.angle(np.asarray(z, dtype=complex))
    return np.where(a < -HALF_PI, a + 2.0 * math.pi, a)


@dataclass(frozen=True)
class Atom:
    location: complex
    mass: float


@dataclass(frozen=True)
class WeightFunction:
    """A 2pi-periodic weight ``k(theta)`` used by :func:`weighted_counting`.

    ``func`` must accept NumPy arrays.
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray]

    def __call__(self, theta):
        return self.func(np.asarray(theta, dtype=float))

    def check_periodic(self, probes: int = 64, rtol: float = 1e-12) -> bool:
        theta = np.linspace(-math.pi, math.pi, probes)
        a = self(theta)
        b = self(theta + 2.0 * math.pi)
        return bool(np.allclose(a, b, rtol=rtol, atol=rtol))


ONE = WeightFunction("one", lambda t: np.ones_like(t))
COS_PLUS = WeightFunction("cos+", lambda t: np.maximum(np.cos(t), 0.0))
COS_MINUS = WeightFunction("cos-", lambda t: np.maximum(-np.cos(t), 0.0))


def _canonical(z: np.ndarray, m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if z.size == 0:
        return np.zeros(0, complex), np.zeros(0, float)
    # +0.0 turns -0.0 into 0.0 so mirror images of axis atoms merge
    z = (z.real + 0.0) + 1j * (z.imag + 0.0)
    order = np.lexsort((z.imag, z.real))
    z, m = z[order], m[order]
    starts = np.concatenate(([True], z[1:] != z[:-1]))
    idx = np.flatnonzero(starts)
    z = z[idx]
    m = np.add.reduceat(m, idx)
    keep = m != 0.0
    z, m = z[keep], m[keep]
    order = np.lexsort((m, principal_arg(z), np.abs(z)))
    return z[order], m[order]


@dataclass(frozen=True, eq=False)
class DiscreteCharge:
    """Finite signed combination of Dirac masses in the plane.

    ``origin_excluded`` promises that no atom sits at 0; construction fails
    if the promise is broken.
    """

    z: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    m: np.ndarray = field(default_factory=lambda: np.zeros(0, float))
    origin_excluded: bool = False

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.z, dtype=complex)).ravel()
        m = np.atleast_1d(np.asarray(self.m, dtype=float)).ravel()
        if m.size == 1 and z.size > 1:
            m = np.full(z.size, m[0])
        if z.shape != m.shape:
            raise DomainError(f"{z.size} locations but {m.size} masses")
        if not (np.all(np.isfinite(z)) and np.all(np.isfinite(m))):
            raise DomainError("atom locations and masses must be finite")
        z, m = _canonical(z, m)
        if self.origin_excluded and np.any(z == 0):
            raise PreconditionError("charge declared origin_excluded has an atom at 0")
        z.flags.writeable = False
        m.flags.writeable = False
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "m", m)

    @classmethod
    def from_atoms(cls, atoms: Iterable, origin_excluded: bool = False) -> "DiscreteCharge":
        """Build from ``Atom`` objects or ``(location, mass)`` pairs."""
        zs, ms = [], []
        for a in atoms:
            if isinstance(a, Atom):
                zs.append(a.location)
                ms.append(a.mass)
            else:
                loc, mass = a
                zs.append(loc)
                ms.append(mass)
        return cls(np.array(zs, complex), np.array(ms, float), origin_excluded)

    @classmethod
    def empty(cls) -> "DiscreteCharge":
        return cls(origin_excluded=True)

    def __len__(self) -> int:
        return int(self.z.size)

    def __iter__(self) -> Iterator[Atom]:
        for zz, mm in zip(self.z, self.m):
            yield Atom(complex(zz), float(mm))

    @property
    def atoms(self) -> list[Atom]:
        return list(self)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.z)

    def is_positive(self) -> bool:
        return bool(np.all(self.m > 0))

    def has_origin_atom(self) -> bool:
        return bool(np.any(self.z == 0))

    def total_mass(self) -> float:
        return float(np.sum(self.m))

    def restrict(self, mask) -> "DiscreteCharge":
        mask = np.asarray(mask, dtype=bool)
        return DiscreteCharge(self.z[mask], self.m[mask], self.origin_excluded)

    def map_locations(self, fn: Callable[[np.ndarray], np.ndarray]) -> "DiscreteCharge":
        return DiscreteCharge(fn(self.z), self.m.copy(), False)

    def __add__(self, other: "DiscreteCharge") -> "DiscreteCharge":
        if not isinstance(other, DiscreteCharge):
            return NotImplemented
        return DiscreteCharge(np.concatenate((self.z, other.z)),
                              np.concatenate((self.m, other.m)),
                              self.origin_excluded and other.origin_excluded)

    def __neg__(self) -> "DiscreteCharge":
        return DiscreteCharge(self.z.copy(), -self.m, self.origin_excluded)

    def __sub__(self, other: "DiscreteCharge") -> "DiscreteCharge":
        if not isinstance(other, DiscreteCharge):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c: float) -> "DiscreteCharge":
        return DiscreteCharge(self.z.copy(), float(c) * self.m, self.origin_excluded)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscreteCharge):
            return NotImplemented
        return (self.z.shape == other.z.shape and bool(np.array_equal(self.z, other.z))
                and bool(np.array_equal(self.m, other.m)))

    __hash__ = None  # type: ignore[assignment]

    def allclose(self, other: "DiscreteCharge", atol: float = 1e-12) -> bool:
        """Atomwise comparison up to ``atol`` in both location and mass."""
        if len(self) != len(other):
            return False
        if len(self) == 0:
            return True
        # match atoms greedily by location; canonical order is unstable under rounding
        used = np.zeros(len(other), bool)
        for zz, mm in zip(self.z, self.m):
            d = np.abs(other.z - zz)
            d[used] = np.inf
            j = int(np.argmin(d))
            if d[j] > atol or abs(other.m[j] - mm) > atol:
                return False
            used[j] = True
        return True

    def to_dict(self) -> dict:
        return {
            "atoms": [{"re": float(a.real), "im": float(a.imag), "mass": float(w)}
                      for a, w in zip(self.z, self.m)],
            "origin_excluded": bool(self.origin_excluded),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DiscreteCharge":
        try:
            atoms = data["atoms"]
            z = np.array([complex(float(a["re"]), float(a["im"])) for a in atoms], complex)
            m = np.array([float(a["mass"]) for a in atoms], float)
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed charge: {exc}") from exc
        return cls(z, m, bool(data.get("origin_excluded", False)))

    def __repr__(self) -> str:
        return f"DiscreteCharge(n_atoms={len(self)}, total_mass={self.total_mass():.6g})"


# ---------------------------------------------------------------- operations


def variations(nu: DiscreteCharge) -> tuple[DiscreteCharge, DiscreteCharge, DiscreteCharge]:
    """Upper, lower and total variation ``(nu+, nu-, |nu|)``."""
    pos = nu.m > 0
    upper = DiscreteCharge(nu.z[pos], nu.m[pos], nu.origin_excluded)
    lower = DiscreteCharge(nu.z[~pos], -nu.m[~pos], nu.origin_excluded)
    total = DiscreteCharge(nu.z.copy(), np.abs(nu.m), nu.origin_excluded)
    return upper, lower, total


def central(nu: DiscreteCharge) -> DiscreteCharge:
    return DiscreteCharge(-nu.z, nu.m.copy(), nu.origin_excluded)


def mirror(nu: DiscreteCharge) -> DiscreteCharge:
    """Reflection in the imaginary axis, ``z -> -conj(z)``."""
    return DiscreteCharge(-np.conj(nu.z), nu.m.copy(), nu.origin_excluded)


def symmetrize(nu: DiscreteCharge, kind: SymmetryKind) -> DiscreteCharge:
    if kind == "central":
        return central(nu)
    if kind == "mirror":
        return mirror(nu)
    if kind == "iR_symmetrization":
        return 0.5 * (nu + mirror(nu))
    if kind == "even_part":
        return 0.5 * (nu + central(nu))
    if kind == "odd_part":
        return 0.5 * (nu - central(nu))
    raise DomainError(f"unknown symmetry kind {kind!r}")


_QUARTER_TURNS = {0: lambda z: z, 1: lambda z: 1j * z, 2: lambda z: -z, 3: lambda z: -1j * z}


def rotate(nu: DiscreteCharge, alpha: float) -> DiscreteCharge:
    """Counter-clockwise rotation: the atom at ``z`` moves to ``exp(i alpha) z``.

    Multiples of pi/2 are applied exactly so that ``rotate(nu, pi)`` coincides
    atomwise with the central reflection.
    """
    q = alpha / HALF_PI
    if q == round(q):
        fn = _QUARTER_TURNS[int(round(q)) % 4]
        z = fn(nu.z)
    else:
        z = np.exp(1j * alpha) * nu.z
    return DiscreteCharge(z, nu.m.copy(), nu.origin_excluded)


def _check_radius(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(r)) or np.any(r < 0):
        raise DomainError("radius must be finite and >= 0")
    return r


def weighted_counting(nu: DiscreteCharge, k: WeightFunction, r):
    """``nu(r; k)``: sum of ``m k(arg z)`` over atoms in the closed disc of radius r.

    ``r`` may be a scalar or an array.
    """
    r = _check_radius(r)
    rho = nu.moduli
    w = nu.m * k(principal_arg(nu.z))
    cum = np.concatenate(([0.0], np.cumsum(w)))
    out = cum[np.searchsorted(rho, r, side="right")]
    return float(out) if out.ndim == 0 else out


def radial_counting(nu: DiscreteCharge, r):
    """``nu^rad(r) = nu(closed disc of radius r)``."""
    return weighted_counting(nu, ONE, r)


class DensityEstimate(NamedTuple):
    value: float
    radius: float


def upper_density(nu: DiscreteCharge, grid) -> DensityEstimate:
    """max over ``grid`` of ``|nu|^rad(r) / r``, a lower estimate of the upper density."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise DomainError("empty radius grid")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be positive and strictly increasing")
    _, _, total = variations(nu)
    ratios = np.asarray(radial_counting(total, grid)) / grid
    j = int(np.argmax(ratios))
    return DensityEstimate(float(ratios[j]), float(grid[j]))


# ------------------------------------------------------------- axis charges

IntervalMass = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _merge_axis_atoms(c: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if c.size == 0:
        return np.zeros(0), np.zeros(0)
    c = c + 0.0
    order = np.argsort(c, kind="stable")
    c, w = c[order], w[order]
    idx = np.flatnonzero(np.concatenate(([True], c[1:] != c[:-1])))
    c, w = c[idx], np.add.reduceat(w, idx)
    keep = w != 0.0
    return c[keep], w[keep]


@dataclass(frozen=True, eq=False)
class AxisCharge:
    """Charge carried by the real or the imaginary axis.

    It consists of point masses at real coordinates plus an optional smooth
    part given as an interval-mass oracle ``smooth(a, b)`` for ``(a, b]``
    (vectorised over arrays) with absolute error at most ``smooth_error`` per
    call.  A ``density`` callable may accompany the smooth part; it is needed
    only by :meth:`moment`.
    """

    axis: Axis
    coords: np.ndarray = field(default_factory=lambda: np.zeros(0))
    masses: np.ndarray = field(default_factory=lambda: np.zeros(0))
    smooth: IntervalMass | None = None
    smooth_error: float = 0.0
    density: Callable[[np.ndarray], np.ndarray] | None = None
    breakpoints: tuple = ()

    def __post_init__(self):
        if self.axis not in ("real", "imaginary"):
            raise DomainError(f"unknown axis {self.axis!r}")
        c = np.atleast_1d(np.asarray(self.coords, float)).ravel()
        w = np.atleast_1d(np.asarray(self.masses, float)).ravel()
        if c.shape != w.shape:
            raise DomainError("coords and masses differ in length")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(w))):
            raise DomainError("axis atoms must be finite")
        c, w = _merge_axis_atoms(c, w)
        c.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "masses", w)
        if self.smooth is None:
            object.__setattr__(self, "smooth_error", 0.0)

    @classmethod
    def empty(cls, axis: Axis) -> "AxisCharge":
        return cls(axis)

    def is_discrete(self) -> bool:
        return self.smooth is None

    def atom_mass(self, a, b):
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        cum = np.concatenate(([0.0], np.cumsum(self.masses)))
        return (cum[np.searchsorted(self.coords, b, side="right")]
                - cum[np.searchsorted(self.coords, a, side="right")])

    def mass(self, a, b):
        """Mass of the half-open interval ``(a, b]`` (vectorised)."""
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        if np.any(b < a):
            raise DomainError("interval (a, b] needs a <= b")
        out = self.atom_mass(a, b)
        if self.smooth is not None:
            out = out + self.smooth(a, b)
        return float(out) if np.ndim(out) == 0 else out

    def distribution(self, x):
        """Distribution function normalised by ``F(0) = 0``."""
        x = np.asarray(x, float)
        pos = self.mass(np.zeros_like(x), np.maximum(x, 0.0))
        neg = self.mass(np.minimum(x, 0.0), np.zeros_like(x))
        out = np.where(x >= 0, pos, -neg)
        return float(out) if out.ndim == 0 else out

    def mass_error(self) -> float:
        return 2.0 * self.smooth_error

    def __add__(self, other: "AxisCharge") -> "AxisCharge":
        if not isinstance(other, AxisCharge):
            return NotImplemented
        if other.axis != self.axis:
            raise DomainError("cannot add charges on different axes")
        smooths = [s for s in (self.smooth, other.smooth) if s is not None]
        smooth = None
        if len(smooths) == 2:
            s1, s2 = smooths
            smooth = lambda a, b: s1(a, b) + s2(a, b)  # noqa: E731
        elif smooths:
            smooth = smooths[0]
        density = None
        if self.density is not None and other.density is not None:
            d1, d2 = self.density, other.density
            density = lambda y: d1(y) + d2(y)  # noqa: E731
        elif smooth is not None:
            density = self.density if other.smooth is None else (
                other.density if self.smooth is None else None)
        return AxisCharge(self.axis,
                          np.concatenate((self.coords, other.coords)),
                          np.concatenate((self.masses, other.masses)),
                          smooth, self.smooth_error + other.smooth_error, density,
                          tuple(sorted(set(self.breakpoints) | set(other.breakpoints))))

    def scale(self, c: float) -> "AxisCharge":
        c = float(c)
        s = self.smooth
        d = self.density
        return AxisCharge(self.axis, self.coords.copy(), c * self.masses,
                          None if s is None else (lambda a, b: c * s(a, b)),
                          abs(c) * self.smooth_error,
                          None if d is None else (lambda y: c * d(y)), self.breakpoints)

    def __neg__(self) -> "AxisCharge":
        return self.scale(-1.0)

    def __sub__(self, other: "AxisCharge") -> "AxisCharge":
        return self + (-other)

    def reflect(self) -> "AxisCharge":
        """Image under ``t -> -t`` (central symmetry restricted to the axis)."""
        s = self.smooth
        d = self.density
        return AxisCharge(self.axis, -self.coords, self.masses.copy(),
                          None if s is None else (lambda a, b: s(-np.asarray(b), -np.asarray(a))),
                          self.smooth_error,
                          None if d is None else (lambda y: d(-np.asarray(y))),
                          tuple(sorted(-x for x in self.breakpoints)))

    def moment(self, g: Callable[[np.ndarray], np.ndarray], a: float, b: float,
               epsabs: float = 1e-11) -> float:
        """``integral of g`` against the charge over ``(a, b]``."""
        sel = (self.coords > a) & (self.coords <= b)
        total = float(np.sum(self.masses[sel] * g(self.coords[sel]))) if np.any(sel) else 0.0
        if self.smooth is None:
            return total
        if self.density is None:
            raise DomainError("moment of a smooth part needs a density")
        from scipy.integrate import quad

        pts = [p for p in self.breakpoints if a < p < b]
        f = self.density
        edges = [a, *pts, b]
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, _ = quad(lambda y: float(g(np.asarray(y)) * f(np.asarray(y))), lo, hi,
                          epsabs=epsabs, epsrel=1e-11, limit=400)
            total += val
        return total

    def to_charge(self) -> DiscreteCharge:
        """Atoms as a planar charge (the smooth part must be absent)."""
        if self.smooth is not None:
            raise DomainError("only purely atomic axis charges convert to DiscreteCharge")
        z = self.coords.astype(complex) if self.axis == "real" else 1j * self.coords
        return DiscreteCharge(z, self.masses.copy())

    def to_dict(self, ordinates=None) -> dict:
        out = {
            "axis": self.axis,
            "atoms": [[float(c), float(w)] for c, w in zip(self.coords, self.masses)],
        }
        if self.smooth is not None:
            out["smooth_error"] = float(self.smooth_error)
        if ordinates is not None:
            ords = np.asarray(ordinates, float)
            out["distribution"] = [[float(t), float(v)]
                                   for t, v in zip(ords, np.atleast_1d(self.distribution(ords)))]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "AxisCharge":
        try:
            pairs = data.get("atoms", [])
            c = np.array([float(p[0]) for p in pairs])
            w = np.array([float(p[1]) for p in pairs])
            return cls(data["axis"], c, w)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise DomainError(f"malformed axis charge: {exc}") from exc


def axis_distribution(nu: DiscreteCharge, axis: Axis) -> AxisCharge:
    """Restriction of ``nu`` to one axis as an exact atomic :class:`AxisCharge`."""
    if axis == "real":
        sel = nu.z.imag == 0
        return AxisCharge("real", nu.z.real[sel], nu.m[sel])
    if axis == "imaginary":
        sel = nu.z.real == 0
        return AxisCharge("imaginary", nu.z.imag[sel], nu.m[sel])
    raise DomainError(f"unknown axis {axis!r}")
