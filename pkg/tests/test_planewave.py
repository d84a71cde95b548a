import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from relwave.kinematics import Conventions
from relwave.planewave import (
    PlaneWave,
    apply_operator_fd,
    born_density,
    dispersion_scan,
    evaluate,
    loglog_slope,
    kinematic_pair_closed_form,
    schrodinger_residual,
)


def test_evaluate_examples(rng):
    w = PlaneWave(1.25, 0.75)
    assert evaluate(w, 0.0, 0.0) == 1
    assert evaluate(w, math.pi / 0.75, 0.0) == pytest.approx(-1, abs=1e-15)
    x, t = rng.uniform(-50, 50, 100), rng.uniform(-50, 50, 100)
    np.testing.assert_allclose(np.abs(evaluate(PlaneWave(1.25, 0.75, amp=2 - 1j), x, t)), abs(2 - 1j), rtol=1e-14)


def test_residual_examples():
    assert schrodinger_residual(PlaneWave(1.25, 0.5)) == 0.0
    assert schrodinger_residual(PlaneWave(1.25, 0.75)) == pytest.approx(-0.3125, abs=1e-15)
    assert schrodinger_residual(PlaneWave(1.0, 0.0)) == 0.0


@given(st.floats(-3, 3), st.sampled_from([1, -1]), st.sampled_from([1, -1]))
def test_residual_zero_iff_on_dispersion(p, eps, s):
    conv = Conventions(energy_sign=eps, spatial_sign=s)
    on = PlaneWave(eps * (p * p + 1.0), p, conv=conv)
    assert abs(schrodinger_residual(on)) <= 1e-12 * (1 + p * p)
    off = PlaneWave(eps * (p * p + 1.0) + 0.1, p, conv=conv)
    assert abs(schrodinger_residual(off)) > 1e-3


@pytest.mark.parametrize("kinetic,rest", [(1.0, True), (0.5, False), (0.5, True)])
def test_finite_difference_route_converges_at_second_order(kinetic, rest):
    w = PlaneWave(1.25, 0.75, amp=0.3 + 0.4j, conv=Conventions(spatial_sign=-1))
    exact = schrodinger_residual(w, kinetic, rest)
    hs = np.array([0.04, 0.02, 0.01])
    errs = [abs(apply_operator_fd(w, 0.3, -1.7, h, kinetic, rest) - exact) for h in hs]
    assert loglog_slope(hs, errs) == pytest.approx(2.0, abs=0.1)
    # independent of (x, t) and amplitude
    assert apply_operator_fd(w, 9.0, 4.0, 1e-3, kinetic, rest) == pytest.approx(exact, abs=1e-5)


def test_dispersion_scan_rows():
    tab = dispersion_scan(Conventions(), [0.0, 0.3, 0.6])
    assert len(tab.v) == 6
    plus = tab.rows(1)
    assert plus["residual_kinematic_pair"][0] == 0.0 and plus["residual_dispersion_pair"][0] == 0.0
    assert plus["residual_kinematic_pair"][2] == pytest.approx(-0.3125, abs=1e-15)
    assert plus["residual_closed_form"][2] == pytest.approx(1.25 - 1.5625, abs=1e-15)
    np.testing.assert_allclose(tab.residual_dispersion_pair, 0.0, atol=1e-12)
    np.testing.assert_allclose(tab.residual_kinematic_pair, tab.residual_closed_form, atol=1e-12)
    minus = tab.rows(-1)
    np.testing.assert_allclose(minus["residual_kinematic_pair"], kinematic_pair_closed_form(minus["w"], 1.0, -1), atol=1e-12)


def test_kinematic_pair_residual_small_v_scaling():
    v = np.logspace(-3, -1, 25)
    w = np.sqrt(1 - v * v)
    r = np.array([schrodinger_residual(PlaneWave(1 / wi, vi / wi)) for vi, wi in zip(v, w)])
    assert r[-1] == pytest.approx(-0.0050632, abs=1e-7)
    # leading behaviour is -v^2/2: slope 2
    assert loglog_slope(v, r) == pytest.approx(2.0, abs=0.01)
    np.testing.assert_allclose(r / (-0.5 * v ** 2), 1.0, atol=0.02)
    # the halved kinetic term removes the v^2 piece and leaves -v^4/8
    h = np.array([schrodinger_residual(PlaneWave(1 / wi, vi / wi), kinetic=0.5) for vi, wi in zip(v, w)])
    assert loglog_slope(v, h) == pytest.approx(4.0, abs=0.01)


def test_born_density():
    b = born_density(np.ones(10), 0.1)
    np.testing.assert_array_equal(b.values, 1.0)
    assert b.total == pytest.approx(1.0)
    b = born_density(evaluate(PlaneWave(1.25, 0.75, amp=2), np.linspace(0, 1, 7), 0.3), 1.0)
    np.testing.assert_allclose(b.values, 4.0)
    two = np.array([np.ones(4), 1j / 3 * np.ones(4)])
    b = born_density(two, 1.0)
    np.testing.assert_allclose(b.values, 1 + 1 / 9)
    np.testing.assert_allclose(b.cross_term, 0.0, atol=1e-16)
    with pytest.raises(ValueError):
        born_density(np.array([np.nan]), 1.0)


@given(st.floats(0, 2 * math.pi))
def test_born_density_phase_invariant(theta):
    f = np.array([1 + 2j, -0.5j, 3.0])
    np.testing.assert_allclose(born_density(f * np.exp(1j * theta), 1.0).values, born_density(f, 1.0).values, rtol=1e-14)
