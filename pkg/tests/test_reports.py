import math

import numpy as np
import pytest

from balkit.errors import DomainError
from balkit.reports import (check_radii, condition_report, decade_trend, dyadic_grid, fmt, judge,
                            log_grid, parse_grid, running_max)


def test_log_grid_endpoints_and_spacing():
    g = log_grid(1, 1e4, 4)
    assert g[0] == 1 and g[-1] == 1e4 and g.size == 17
    assert np.allclose(np.diff(np.log10(g)), 0.25)


def test_parse_grid_and_errors():
    assert np.array_equal(parse_grid("1:100:2"), log_grid(1, 100, 2))
    for bad in ("1:100", "a:b:c", "10:1:3"):
        with pytest.raises(DomainError):
            parse_grid(bad)


def test_dyadic_grid():
    assert list(dyadic_grid(1, 3)) == [1, 2, 4, 8]


def test_check_radii_rejects_bad_grids():
    for bad in ([1], [1, 1], [2, 1], [0, 1]):
        with pytest.raises(DomainError):
            check_radii(bad)


def test_fmt_round_trips():
    for x in (0.1, math.pi, 1e-300, -2.5e17):
        assert float(fmt(x)) == x


def test_trend_of_constant_and_log_profiles():
    r = log_grid(1, 1e4, 8)
    flat = decade_trend(r, np.ones_like(r))
    assert flat.slope == pytest.approx(0.0, abs=1e-12)
    assert judge(flat, 0.05) == "bounded"
    grow = decade_trend(r, np.log(r))
    assert grow.slope == pytest.approx(math.log(10), rel=1e-9)
    assert judge(grow, 0.05) == "diverging"


def test_short_range_is_inconclusive():
    r = log_grid(1, 100, 4)
    assert judge(decade_trend(r, np.log(r)), 0.05) == "inconclusive"


def test_running_max():
    assert list(running_max([1, 3, 2, 5, 4])) == [1, 3, 3, 5, 5]


def test_condition_report_with_complex_partials():
    r = log_grid(1, 1e4, 2)
    p = np.exp(1j * r)
    rep = condition_report("demo", r, p)
    assert rep.holds()
    assert rep.partials == pytest.approx(np.cos(r).tolist())
    assert rep.extra["partials_imag"] == pytest.approx(np.sin(r).tolist())
    assert rep.to_csv().splitlines()[0] == "r,partial,running_sup"
