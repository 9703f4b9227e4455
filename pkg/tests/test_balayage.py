import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from balkit.balayage import (CauchySum, balayage_genus0, balayage_genus1, balayage_growth_report,
                             harmonic_charge_genus1, harmonic_measure, lindelof_remainder,
                             total_variation_radial, two_sided_via_symmetrization)
from balkit.errors import DomainError, PreconditionError
from balkit.fixtures import separated_charge
from balkit.measures import DiscreteCharge, axis_distribution, mirror
from balkit.reports import log_grid

from conftest import charges
from oracles import atoms_of, subtended_angle

off_axis = st.tuples(st.floats(0.05, 20), st.floats(-20, 20), st.sampled_from([-1, 1])).map(
    lambda t: complex(t[0] * t[2], t[1]))
# off-axis charges whose atoms keep a visible distance from the axis
off_charges = st.lists(st.tuples(off_axis, st.floats(-3, 3).filter(lambda m: abs(m) > 1e-3)),
                       max_size=12).map(DiscreteCharge.from_atoms)
segments = st.tuples(st.floats(-30, 30), st.floats(0.01, 30))


def test_kernel_values():
    assert harmonic_measure(1, -1, 1) == pytest.approx(0.5, abs=1e-14)
    assert harmonic_measure(1, 0, 1) == pytest.approx(0.25, abs=1e-14)
    assert harmonic_measure(1e12, -1, 1) < 1e-11
    assert harmonic_charge_genus1(1, -1, 1) == pytest.approx(0.5 - 2 / math.pi, abs=1e-14)
    assert harmonic_charge_genus1(3j, -1, 1) == harmonic_measure(3j, -1, 1) == 0.0


def test_kernel_errors():
    with pytest.raises(DomainError):
        harmonic_measure(1, 1, -1)
    with pytest.raises(DomainError):
        harmonic_measure(0.5j, 0, 1)
    with pytest.raises(DomainError):
        harmonic_charge_genus1(0, -1, 1)


@given(off_axis, segments)
def test_harmonic_measure_is_subtended_angle(z, seg):
    y1, w = seg
    val = harmonic_measure(z, y1, y1 + w)
    assert 0 <= val <= 1
    assert val == pytest.approx(subtended_angle(z, y1, y1 + w) / math.pi, abs=1e-12)


@given(off_axis, segments, st.floats(0.01, 30))
def test_kernel_additivity_and_mirror(z, seg, w2):
    y1, w1 = seg
    y2, y3 = y1 + w1, y1 + w1 + w2
    for k in (harmonic_measure, harmonic_charge_genus1):
        assert k(z, y1, y2) + k(z, y2, y3) == pytest.approx(k(z, y1, y3), abs=1e-12)
    zm = -z.conjugate()
    assert harmonic_charge_genus1(z, y1, y2) == harmonic_charge_genus1(zm, y1, y2)


# ------------------------------------------------------------- genus zero


def test_genus0_single_atom_is_cauchy():
    res = balayage_genus0(DiscreteCharge.from_atoms([(1, 1)]))
    assert res.output.mass(-1, 1) == pytest.approx(0.5, abs=1e-15)
    assert res.output.mass(0, math.inf) == pytest.approx(0.5, abs=1e-15)
    assert res.genus == "zero" and res.kernel_call_count == 1


def test_genus0_axis_atoms_pass_through():
    res = balayage_genus0(DiscreteCharge.from_atoms([(2j, 3.0)]))
    assert res.output.mass(1.9, 2) == 3.0
    assert res.output.mass(2, 2.1) == 0.0


def test_genus0_positive_mass_converges_monotonically(rng):
    z = rng.uniform(0.5, 5, 30) + 1j * rng.uniform(-5, 5, 30)
    nu = DiscreteCharge(z, rng.uniform(0.1, 1, 30))
    out = balayage_genus0(nu).output
    totals = [out.mass(-Y, Y) for Y in (1e2, 1e4, 1e6)]
    assert totals[0] < totals[1] < totals[2] <= nu.m.sum() + 1e-12
    assert totals[2] == pytest.approx(nu.m.sum(), rel=1e-5)
    edges = np.linspace(-20, 20, 81)
    assert np.all(out.mass(edges[:-1], edges[1:]) >= 0)


def test_genus0_warns_without_classical_blaschke():
    k = np.arange(1, 20_001, dtype=float)
    res = balayage_genus0(DiscreteCharge(k.astype(complex), np.ones(k.size)))
    assert any("right" in w for w in res.warnings)


@pytest.mark.parametrize("z0,w", [(0.3 + 1j, -1 + 0.5j), (2 - 3j, -0.2 + 4j), (4.5, -2.0)])
def test_genus0_preserves_potential_in_other_half_plane(z0, w):
    out = balayage_genus0(DiscreteCharge.from_atoms([(z0, 1)])).output
    f = lambda y: math.log(abs(w - 1j * y)) * out.density(y)
    val = quad(f, -np.inf, z0.imag, limit=400)[0] + quad(f, z0.imag, np.inf, limit=400)[0]
    assert val == pytest.approx(math.log(abs(w - z0)), abs=1e-6)


# -------------------------------------------------------------- genus one


def test_genus1_examples():
    anti = DiscreteCharge.from_atoms([(1, 1), (-1, -1)])
    assert balayage_genus1(anti).output.mass(-50, 50) == pytest.approx(0, abs=1e-15)
    pair = DiscreteCharge.from_atoms([(1, 1), (-1, 1)])
    assert balayage_genus1(pair).output.mass(-1, 1) == pytest.approx(1 - 4 / math.pi, abs=1e-14)
    axis = balayage_genus1(DiscreteCharge.from_atoms([(2j, 1)])).output
    assert axis.mass(1, 2) == 1 and axis.mass(-10, 1.99) == 0 and axis.mass(2, 10) == 0


def test_unit_disc_split_and_boundary_rule():
    inner = DiscreteCharge.from_atoms([(0.5 + 0.2j, 1)])
    assert balayage_genus1(inner).output.mass(-1, 2) == pytest.approx(
        harmonic_measure(0.5 + 0.2j, -1, 2), abs=1e-15)
    on = DiscreteCharge.from_atoms([(1, 1)])
    assert balayage_genus1(on, boundary="outer").output.mass(-1, 1) == pytest.approx(
        harmonic_charge_genus1(1, -1, 1), abs=1e-15)
    assert balayage_genus1(on, boundary="inner").output.mass(-1, 1) == pytest.approx(0.5, abs=1e-15)


@given(charges(max_atoms=30), st.lists(segments, min_size=1, max_size=5))
def test_genus1_against_kernel_oracle(nu, segs):
    out = balayage_genus1(nu).output
    for y1, w in segs:
        y2 = y1 + w
        ref = 0.0
        for z, m in atoms_of(nu):
            if z.real == 0:
                ref += m if y1 < z.imag <= y2 else 0.0
            elif abs(z) >= 1:
                ref += m * harmonic_charge_genus1(z, y1, y2)
            else:
                ref += m * harmonic_measure(z, y1, y2)
        assert out.mass(y1, y2) == pytest.approx(ref, abs=1e-11)


@given(charges(max_atoms=30), st.lists(segments, min_size=1, max_size=5))
def test_two_evaluation_paths_agree(nu, segs):
    direct = balayage_genus1(nu, "two_sided").output
    other = two_sided_via_symmetrization(nu)
    for y1, w in segs:
        assert direct.mass(y1, y1 + w) == pytest.approx(other.mass(y1, y1 + w), abs=1e-10)


@given(charges(max_atoms=20), charges(max_atoms=20), segments)
def test_linearity(a, b, seg):
    y1, w = seg
    lhs = balayage_genus1(a + b).output.mass(y1, y1 + w)
    rhs = balayage_genus1(a).output.mass(y1, y1 + w) + balayage_genus1(b).output.mass(y1, y1 + w)
    assert lhs == pytest.approx(rhs, abs=1e-11)


@given(charges(max_atoms=20), segments)
def test_antimirror_annihilated(nu, seg):
    off = nu.restrict(nu.z.real != 0)
    y1, w = seg
    assert balayage_genus1(off - mirror(off)).output.mass(y1, y1 + w) == pytest.approx(0, abs=1e-11)


def test_one_sided_modes_keep_other_half():
    nu = DiscreteCharge.from_atoms([(1 + 1j, 1), (-2, 1), (3j, 1)])
    right = balayage_genus1(nu, "right")
    assert right.unswept == DiscreteCharge.from_atoms([(-2, 1)])
    assert right.kernel_call_count == 1 and right.genus == "one_right"
    left = balayage_genus1(nu, "left")
    assert left.unswept == DiscreteCharge.from_atoms([(1 + 1j, 1)])


def test_genus1_preconditions():
    with pytest.raises(PreconditionError):
        balayage_genus1(DiscreteCharge.from_atoms([(1e-12, 1)]))
    with pytest.raises(DomainError):
        balayage_genus1(DiscreteCharge.empty(), mode="up")


# ------------------------------------------------------ closed-form pieces


@given(off_charges, st.floats(0.1, 10), st.floats(1.01, 50))
def test_inverse_moment_matches_quadrature(nu, a, ratio):
    cs = balayage_genus1(nu).swept
    b = a * ratio
    for lo, hi in ((a, b), (-b, -a)):
        pts = [float(p) for p in cs.y0 if lo < p < hi]
        ref = quad(lambda y: cs.density(y) / y, lo, hi, points=pts or None, limit=500,
                   epsabs=1e-12, epsrel=1e-12)[0]
        assert cs.inverse_moment(lo, hi) == pytest.approx(ref, abs=1e-8 * (1 + abs(ref)))
    with pytest.raises(DomainError):
        cs.inverse_moment(-1, 1)


@given(off_charges)
def test_variation_split_recomposes(nu):
    cs = balayage_genus1(nu).swept
    pos, neg = cs.split()
    edges = np.linspace(-60, 60, 121)
    a, b = edges[:-1], edges[1:]
    assert np.allclose(np.asarray(pos.mass(a, b)) - np.asarray(neg.mass(a, b)), cs.mass(a, b),
                       atol=1e-10)
    assert np.all(np.asarray(pos.mass(a, b)) >= -1e-14)
    assert np.all(np.asarray(neg.mass(a, b)) >= -1e-14)
    ys = np.linspace(-60, 60, 997)
    assert np.all(pos.density(ys) * neg.density(ys) == 0)


def test_sign_changes_of_single_genus1_atom():
    # m (Cauchy(0, 1) - 1/pi) vanishes at y = 0 only
    cs = CauchySum(np.array([1.0]), np.array([0.0]), np.array([1.0]), np.array([1 / math.pi]))
    roots = cs.sign_changes()
    assert roots.size == 0 or np.allclose(roots, 0.0, atol=1e-10)
    pos, neg = cs.split()
    assert pos.mass(-10, 10) == 0.0
    assert neg.mass(-10, 10) == pytest.approx((20 - 2 * math.atan(10)) / math.pi, abs=1e-12)


# ------------------------------------------------------------ growth report


def test_growth_report_single_atom():
    res = balayage_genus1(DiscreteCharge.from_atoms([(1, 1)]))
    rep = balayage_growth_report(res, log_grid(1, 1e4, 4))
    tail = [p for r, p in zip(rep.radii, rep.partials) if r >= 10]
    assert all(x >= y for x, y in zip(tail[:-1], tail[1:]))
    small = np.array(rep.extra["small_ratio"])
    # the density is -y^2/pi + O(y^4) near 0, so the ratio is about 2r/(3 pi)
    radii = np.array(rep.extra["small_radii"])
    assert np.all(small <= 2 * radii / (3 * math.pi) + 1e-12)
    # the density of pi^-1 (1/(1+y^2) - 1) has |.| integral 2r - 2 atan r over (-r, r]
    r = np.array([5.0, 50.0])
    assert total_variation_radial(res, r) == pytest.approx((2 * r - 2 * np.arctan(r)) / math.pi,
                                                           rel=1e-9)


def test_lindelof_remainder_bounded_for_separated_charge(rng):
    nu = separated_charge(rng, 50, d=0.3)
    res = balayage_genus1(nu)
    rem = lindelof_remainder(res, log_grid(1, 1e4, 4))
    assert np.max(np.abs(rem)) < 10
    rep = balayage_growth_report(res, log_grid(1, 1e4, 4))
    assert rep.extra["lindelof_remainder_verdict"] == "holds_on_range"
    assert rep.extra["unit_window_sup"] < 10


def test_result_serialises():
    res = balayage_genus1(DiscreteCharge.from_atoms([(1 + 1j, 2), (3j, 1)]))
    d = json.loads(json.dumps(res.to_dict(np.linspace(-5, 5, 11))))
    assert d["genus"] == "one_two_sided" and len(d["swept_atoms"]) == 1
    assert axis_distribution(res.source, "imaginary").masses.tolist() == [1.0]
