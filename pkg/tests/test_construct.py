import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from balkit.construct import (compensator_alpha, lindelof_equalizer, pr52_pipeline,
                              separation_check)
from balkit.errors import DomainError, PreconditionError
from balkit.fixtures import random_charge, separated_charge
from balkit.logchar import characteristic_log, log_interval
from balkit.measures import DiscreteCharge, central
from balkit.reports import log_grid

from conftest import charges


def brute_sup_rise(nu, side):
    """max over 0 <= r < R of l^side(r, R], scanning all atom radii.

    Radii are the charge's own moduli so that atoms placed at a modulus by the
    library share a window boundary with the atom they compensate.
    """
    sgn = 1.0 if side == "right" else -1.0
    terms = [(float(rho), m * max(sgn * (1 / z).real, 0.0))
             for z, m, rho in zip(nu.z, nu.m, nu.moduli)]
    cuts = sorted({0.0, *(rho for rho, _ in terms)})
    best = 0.0
    for i, r in enumerate(cuts):
        for R in cuts[i + 1:]:
            best = max(best, math.fsum(w for rho, w in terms if r < rho <= R))
    return best


def test_separation_examples():
    assert separation_check(DiscreteCharge.from_atoms([(1, 1)]), 0.5).separated
    s = separation_check(DiscreteCharge.from_atoms([(1j, 1)]), 0.01)
    assert s.d_min == 0 and not s.separated
    diag = DiscreteCharge.from_atoms([(1 + 1j, 1), (-2 + 2j, 1)])
    assert separation_check(diag, 0.5).d_min == pytest.approx(math.sqrt(2) / 2)
    assert separation_check(DiscreteCharge.empty(), 0.3).d_min == 1
    with pytest.raises(DomainError):
        separation_check(diag, 0)


def test_compensator_hand_traced_examples():
    neg = compensator_alpha(DiscreteCharge.from_atoms([(1, -1)]), "right")
    assert neg.alpha.coords.tolist() == [1.0] and neg.alpha.masses.tolist() == [1.0]
    assert neg.M_side == 0 and neg.achieved_bound == 0
    assert neg.a_function([0.5, 1.0, 5.0]).tolist() == [0.0, 1.0, 1.0]
    pos = compensator_alpha(DiscreteCharge.from_atoms([(1, 1)]), "right")
    assert pos.alpha.coords.size == 0 and pos.M_side == 1
    assert pos.a_function([0.5, 3.0]).tolist() == [-1.0, -1.0]
    assert pos.achieved_bound <= 2
    empty = compensator_alpha(DiscreteCharge.empty(), "left")
    assert empty.alpha.coords.size == 0 and empty.M_side == 0


def test_compensator_left_side_places_mass_on_negative_axis():
    res = compensator_alpha(DiscreteCharge.from_atoms([(-2, -3)]), "left")
    assert res.alpha.coords.tolist() == [-2.0] and res.alpha.masses.tolist() == [3.0]


def test_compensator_preconditions():
    with pytest.raises(PreconditionError):
        compensator_alpha(DiscreteCharge.from_atoms([(0, 1)]))
    with pytest.raises(DomainError):
        compensator_alpha(DiscreteCharge.empty(), "up")


@given(charges(max_atoms=30), st.sampled_from(["right", "left"]))
def test_compensator_postconditions(eta, side):
    res = compensator_alpha(eta, side, log_grid(0.01, 100, 2))
    assert res.M_side == pytest.approx(brute_sup_rise(eta, side), abs=1e-10)
    assert np.all(res.alpha.masses > 0)
    assert np.all(np.diff(res.a_values) >= 0)
    assert res.achieved_bound <= 2 * res.M_side + 1e-9
    assert res.grid_bound <= 2 * res.M_side + 1e-9
    total = eta + res.charge
    # the compensated characteristic logarithm stays inside [-M, M] at every jump
    for t in res.jump_radii:
        assert abs(characteristic_log(total, side, t)) <= res.M_side + 1e-9
    assert brute_sup_rise(total, side) <= 2 * res.M_side + 1e-9


def test_compensator_serialises():
    res = compensator_alpha(DiscreteCharge.from_atoms([(1, -1), (3, 2)]), "right", [1, 10])
    d = json.loads(json.dumps(res.to_dict()))
    assert d["a_function"][0] == [0.0, res.a_values[0]]
    assert d["bound_ok"] is True


# ------------------------------------------------------------------ pr52


def test_pr52_equal_inputs_are_trivial():
    mu = DiscreteCharge.from_atoms([(2 + 1j, 1), (-3, 2)])
    res = pr52_pipeline(mu, mu)
    assert res.alpha.coords.size == 0
    assert len(res.theta.swept) == 0
    assert res.diagnostics["asg_residual"] == 0 and res.diagnostics["gamma_even_residual"] == 0
    assert all(ok for *_, ok in res.scorecard())


def test_pr52_single_atom():
    res = pr52_pipeline(DiscreteCharge.from_atoms([(2, 1)]), DiscreteCharge.empty())
    assert res.alpha_right.alpha.coords.size == 0
    d = res.diagnostics
    assert d["asg_residual"] <= 1e-9 and d["gamma_even_residual"] <= 1e-9
    assert d["beta_min_mass"] >= -1e-12
    assert res.theta.output.mass(-1, 1) == pytest.approx(
        (2 * math.atan(0.5) / math.pi - 2 / (2 * math.pi)), abs=1e-14)


def test_pr52_uniform_gamma_on_separated_pair(rng):
    nu = separated_charge(rng, 15, 0.3)
    mu = nu + separated_charge(rng, 15, 0.3)
    res = pr52_pipeline(nu, mu, uniform_gamma=True, d_threshold=0.3)
    d = res.diagnostics
    assert d["asg_residual"] <= 1e-9 and d["gamma_even_residual"] <= 1e-9
    assert res.c_uniform > 0
    assert d["gamma_prime_residual"] <= 1e-9 * (1 + res.c_uniform * d["probe_span"])
    assert d["beta_prime_min_mass"] >= -1e-9
    assert not res.warnings
    json.dumps(res.to_dict())


def test_pr52_warnings_and_errors(rng):
    nu = random_charge(rng, 10, signed=False, axis_fraction=0.5)
    res = pr52_pipeline(nu, DiscreteCharge.empty(), uniform_gamma=True)
    assert any("angle-separated" in w for w in res.warnings)
    with pytest.raises(DomainError):
        pr52_pipeline(DiscreteCharge.from_atoms([(1, -1)]), DiscreteCharge.empty())
    with pytest.raises(PreconditionError):
        pr52_pipeline(DiscreteCharge.from_atoms([(0, 1)]), DiscreteCharge.empty())


# ------------------------------------------------------------- equalizer


def test_equalizer_axis_atom():
    res = lindelof_equalizer(DiscreteCharge.from_atoms([(1.5j, 1)]))
    assert res.b_right[0] == pytest.approx(4 / 3, abs=1e-15) and res.b_left[0] == 0
    assert res.beta.coords.tolist() == [-2.0]
    assert res.annulus_values[0] == pytest.approx(2 / 3, abs=1e-15)
    assert res.residual <= 1e-12


def test_equalizer_diagonal_atom():
    res = lindelof_equalizer(DiscreteCharge.from_atoms([(1.5 * np.exp(1j * math.pi / 4), 1)]))
    assert res.b_right[0] == pytest.approx(2 * math.cos(math.pi / 4) / 1.5, abs=1e-12)
    assert res.residual <= 1e-12


def test_equalizer_even_measure_needs_nothing():
    mu = DiscreteCharge.from_atoms([(1 + 2j, 1), (3 - 1j, 2)])
    res = lindelof_equalizer(mu + central(mu))
    assert res.beta.coords.size == 0 and res.residual == 0


@given(charges(max_atoms=30, positive=True, min_modulus=1.0))
def test_equalizer_identities(mu):
    res = lindelof_equalizer(mu)
    assert res.residual <= 1e-12
    assert res.mus_residual == 0
    assert np.all(res.beta.masses > 0)
    assert all(abs(abs(c) - 2.0 ** round(math.log2(abs(c)))) == 0 for c in res.beta.coords)


def test_equalizer_one_sided_even_alternative(rng):
    z = np.exp(rng.uniform(0, math.log(1e4), 60)) * np.exp(1j * rng.uniform(-1.2, 1.2, 60))
    res = lindelof_equalizer(DiscreteCharge(z, np.ones(60)))
    # the axis masses repair the quarter-turned profiles only; the real part of a
    # one-sided measure still diverges, which the even alternative removes
    slopes = res.lindelof.extra["slopes"]
    assert slopes["mu_rot.rl"] <= 0.05 and slopes["mu_rot.rm"] <= 0.05
    assert slopes["mu.rl"] > 0.05 and not res.lindelof.holds()
    assert res.even_alternative is not None
    assert res.even_lindelof.holds()
