import math

import numpy as np
import pytest

from balkit.conditions import blaschke_genus1, lindelof_genus1
from balkit.errors import DomainError
from balkit.fixtures import (alternating, ex31, integers, log_density_points, m_log_density,
                             odd_charge, random_charge, separated_charge, slow_mass)
from balkit.logchar import log_interval
from balkit.measures import upper_density
from balkit.reports import log_grid


def test_slow_mass_is_increasing_and_sublinear():
    x = np.geomspace(1, 1e6, 50)
    m = slow_mass(x)
    assert np.all(np.diff(m) > 0)
    assert np.all(np.diff(m / x) < 0)


def test_log_density_masses_telescope():
    x, w = log_density_points(41, 1e3)
    assert math.fsum(w) == pytest.approx(slow_mass(1e3), rel=1e-13)
    with pytest.raises(DomainError):
        log_density_points(1)


def test_m_log_density_is_even_and_positive():
    mu = m_log_density(41)
    assert mu.is_positive()
    assert np.all(np.abs(lindelof_genus1(mu, log_grid(1, 1e4, 4)).partials) < 1e-12)


def test_ex31_parts():
    ex = ex31(0.7, n=41)
    assert (ex.mu - ex.mu_theta) == ex.nu
    assert np.allclose(np.sort(ex.mu_theta.moduli), np.sort(ex.mu.moduli))
    with pytest.raises(DomainError):
        ex31(2.0)


def test_ex31_genus1_partials_follow_rotation():
    # on each window the rotated copy keeps the fraction cos(theta) of the real weights
    ex = ex31(0.7, n=81)
    # window ends sit between the geometric nodes, away from rounding of rotated moduli
    grid = log_grid(1, 1e4, 2)[:-1] * 10 ** (1 / 40)
    for r, R in zip(grid[:-1], grid[1:]):
        lmu = log_interval(ex.mu, "right", r, R)
        assert log_interval(ex.nu, "right", r, R) == pytest.approx((1 - math.cos(0.7)) * lmu,
                                                                   rel=1e-9, abs=1e-12)


def test_alternating_and_odd():
    alt = alternating(10)
    assert len(alt) == 20 and alt.m.sum() == 0
    assert blaschke_genus1(alt, "right", log_grid(1, 1e4, 4)).holds()
    odd = odd_charge(41)
    assert np.allclose(odd.m[odd.z.real > 0], -odd.m[odd.z.real < 0][::-1]) or \
        math.isclose(odd.m.sum(), 0.0, abs_tol=1e-12)


def test_integers_fixture():
    Z = integers(10)
    assert Z.z.real.tolist() == list(range(1, 11))
    half = integers(5, step=0.5)
    assert len(half) == 10
    assert upper_density(integers(1000), log_grid(10, 1000, 4)).value == pytest.approx(1.0)


def test_random_generators(rng):
    nu = random_charge(rng, 200, axis_fraction=0.3)
    assert len(nu) == 200 and np.any(nu.z.real == 0) and np.any(nu.m < 0)
    assert np.all((nu.moduli >= 1) & (nu.moduli <= 10))
    sep = separated_charge(rng, 200, d=0.4)
    assert np.all(np.abs(sep.z.real) >= 0.4 * sep.moduli - 1e-12) and sep.is_positive()
