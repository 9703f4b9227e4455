"""Named charges used by the examples, the CLI and the test-suite."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .measures import DiscreteCharge, rotate


def slow_mass(x):
    """``m(x) = x / ln(e + x)``: increasing, zero type, divergent at order 1."""
    x = np.asarray(x, float)
    return x / np.log(math.e + x)


def log_density_points(n: int, r_max: float = 1e4) -> tuple[np.ndarray, np.ndarray]:
    """Geometric nodes in ``[1, r_max]`` with increments of :func:`slow_mass` as masses."""
    if n < 2:
        raise DomainError("need at least two nodes")
    x = np.geomspace(1.0, r_max, n)
    return x, np.diff(slow_mass(np.concatenate(([0.0], x))))


def m_log_density(n: int, r_max: float = 1e4) -> DiscreteCharge:
    """Discretised measure on the real line with distribution ``+-m(|x|)``."""
    x, w = log_density_points(n, r_max)
    return DiscreteCharge(np.concatenate((x, -x)).astype(complex), np.concatenate((w, w)),
                          origin_excluded=True)


@dataclass
class Ex31:
    """The measure ``mu``, its rotation ``mu_theta`` and the charge ``mu - mu_theta``."""

    mu: DiscreteCharge
    mu_theta: DiscreteCharge
    nu: DiscreteCharge
    theta: float


def ex31(theta: float = 0.7, n: int = 161, r_max: float = 1e4) -> Ex31:
    if not 0 < theta < math.pi / 2:
        raise DomainError("theta must lie in (0, pi/2)")
    mu = m_log_density(n, r_max)
    mu_t = rotate(mu, theta)
    return Ex31(mu, mu_t, mu - mu_t, theta)


def alternating(n: int) -> DiscreteCharge:
    """``sum_{k=1..n} (delta_{2k} - delta_{2k+1})`` on the positive axis."""
    k = np.arange(1, n + 1, dtype=float)
    z = np.concatenate((2 * k, 2 * k + 1)).astype(complex)
    m = np.concatenate((np.ones(n), -np.ones(n)))
    return DiscreteCharge(z, m, origin_excluded=True)


def odd_charge(n: int = 161, r_max: float = 1e4) -> DiscreteCharge:
    """Odd charge whose right half-plane part is the slowly divergent measure."""
    x, w = log_density_points(n, r_max)
    return DiscreteCharge(np.concatenate((x, -x)).astype(complex), np.concatenate((w, -w)),
                          origin_excluded=True)


def integers(n: int, step: float = 1.0, start: float | None = None) -> DiscreteCharge:
    """Unit atoms at ``start, start + step, ..., <= n`` on the positive axis."""
    start = step if start is None else start
    pts = np.arange(start, n + step / 2, step)
    return DiscreteCharge(pts.astype(complex), np.ones(pts.size), origin_excluded=True)


def random_charge(rng: np.random.Generator, n: int, r_min: float = 1.0, r_max: float = 10.0,
                  signed: bool = True, axis_fraction: float = 0.0) -> DiscreteCharge:
    """Atoms with log-uniform moduli and uniform arguments."""
    rho = np.exp(rng.uniform(math.log(r_min), math.log(r_max), n))
    phi = rng.uniform(-math.pi, math.pi, n)
    if axis_fraction > 0:
        on = rng.random(n) < axis_fraction
        phi[on] = np.where(rng.random(np.count_nonzero(on)) < 0.5, 0.5, -0.5) * math.pi
    z = rho * np.exp(1j * phi)
    z = np.where(np.abs(phi) == 0.5 * math.pi, 1j * np.sign(phi) * rho, z)
    m = rng.uniform(0.1, 2.0, n)
    if signed:
        m = m * rng.choice([-1.0, 1.0], n)
    return DiscreteCharge(z, m, origin_excluded=True)


def separated_charge(rng: np.random.Generator, n: int, d: float = 0.3, r_min: float = 1.0,
                     r_max: float = 10.0) -> DiscreteCharge:
    """Positive atoms with ``|Re z| >= d |z|``."""
    rho = np.exp(rng.uniform(math.log(r_min), math.log(r_max), n))
    half = math.acos(d)
    phi = rng.uniform(-half, half, n) + math.pi * (rng.random(n) < 0.5)
    return DiscreteCharge(rho * np.exp(1j * phi), rng.uniform(0.2, 2.0, n), origin_excluded=True)


NAMED = ("ex31", "alt-sign", "odd", "integers", "m-log-density")
