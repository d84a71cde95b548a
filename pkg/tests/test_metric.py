import math
import warnings

import numpy as np
import pytest

from relwave.errors import MetricDomainError, VelocityOutOfRange
from relwave.errors import InvariantDriftWarning
from relwave.kinematics import Conventions
from relwave.metric import Metric1D, TableProfile, integrate, interval_residual, launch, step

FLAT = Metric1D.flat()
RAMP = Metric1D.from_expressions("1 + 0.2*x", "1")


def test_launch_flat():
    s = launch(FLAT, 0.0, 0.6)
    assert (s.ut, s.ux, s.kappa0) == pytest.approx((1.25, 0.75, 1.25), abs=1e-15)
    r = launch(FLAT, 0.0, 0.0)
    assert (r.ut, r.ux, r.kappa0) == (1.0, 0.0, 1.0)
    with pytest.raises(VelocityOutOfRange):
        launch(FLAT, 0.0, 1.0)
    with pytest.raises(VelocityOutOfRange):
        launch(FLAT, 0.0, -2.0)


def test_launch_sign_follows_velocity():
    assert launch(RAMP, 1.0, -0.3).ux < 0
    assert launch(RAMP, 1.0, 0.3).ux > 0


def test_flat_step_is_straight_line():
    s = launch(FLAT, 0.0, 0.6)
    s1 = step(s, FLAT, 1.0)
    assert (s1.x, s1.t) == pytest.approx((0.75, 1.25), abs=1e-14)
    r = step(launch(FLAT, 2.0, 0.0), FLAT, 0.37)
    assert r.x == 2.0 and r.t == pytest.approx(0.37, abs=1e-15)


def test_flat_endpoint():
    path = integrate(FLAT, 0.0, 0.6, 2.0, 1e-3)
    assert path.x[-1] == pytest.approx(1.5, abs=1e-12)
    assert path.t[-1] == pytest.approx(2.5, abs=1e-12)
    assert path.x[-1] / path.t[-1] == pytest.approx(0.6, abs=1e-12)
    # closed-form speed relation: ux^2 = c^2 (kappa0^2 - 1)
    assert path.closed_form_ux2[0] == pytest.approx(0.5625, abs=1e-14)


def test_ramp_from_origin_conserves_with_fine_step():
    path = integrate(RAMP, 0.0, 0.0, 5.0, 5e-4)  # 10^4 steps, stays clear of the horizon
    assert len(path.tau) == 10001
    assert np.max(np.abs(path.interval_residual)) <= 1e-8
    assert np.max(path.kappa_drift) <= 1e-8
    assert np.max(path.ux_mismatch) <= 1e-8


@pytest.mark.filterwarnings("ignore::relwave.errors.InvariantDriftWarning")
def test_ramp_from_origin_reaches_horizon_with_coarse_step():
    # released at rest from x=0 the particle reaches g_tt=0 at tau = 5 pi / 2 < 10
    with pytest.raises(MetricDomainError):
        integrate(RAMP, 0.0, 0.0, 10.0, 1e-3)


def test_ramp_long_run_from_x5():
    path = integrate(RAMP, 5.0, 0.0, 10.0, 1e-3)
    assert np.max(np.abs(path.interval_residual)) <= 1e-8
    assert np.max(path.kappa_drift) <= 1e-8
    assert np.max(path.ux_mismatch) <= 1e-8
    assert path.x[-1] < 5.0  # falls towards lower g_tt


def test_geodesic_time_equation_matches_first_integral():
    a = integrate(RAMP, 5.0, 0.2, 3.0, 1e-3, time_equation="first_integral")
    b = integrate(RAMP, 5.0, 0.2, 3.0, 1e-3, time_equation="geodesic")
    assert np.max(np.abs(a.x - b.x)) < 1e-10
    assert np.max(b.kappa_drift) < 1e-10


def test_matches_independent_ode_solver():
    from scipy.integrate import solve_ivp

    # second-order geodesic system integrated by an adaptive solver as the oracle
    def rhs(tau, y):
        x, ux, t, ut = y
        return [ux, -0.2 * ut * ut / 2.0, ut, -(0.2 / (1 + 0.2 * x)) * ux * ut]

    s = launch(RAMP, 5.0, 0.3)
    ref = solve_ivp(rhs, (0, 4.0), [s.x, s.ux, s.t, s.ut], rtol=1e-12, atol=1e-12)
    path = integrate(RAMP, 5.0, 0.3, 4.0, 1e-3, time_equation="geodesic")
    assert path.x[-1] == pytest.approx(ref.y[0, -1], abs=1e-9)
    assert path.t[-1] == pytest.approx(ref.y[2, -1], abs=1e-9)


def test_domain_and_positivity_errors():
    m = Metric1D.from_expressions("1 + x", "1", domain=(-0.5, 2.0))
    with pytest.raises(MetricDomainError, match="outside"):
        m.evaluate(3.0)
    bad = Metric1D.from_expressions("x", "1")
    with pytest.raises(MetricDomainError, match="not positive"):
        bad.evaluate(-1.0)


def test_table_profile_matches_expression():
    xs = np.linspace(-1.0, 30.0, 3101)
    m = Metric1D.from_table(xs, 1 + 0.2 * xs, np.ones_like(xs))
    assert m.domain == (-1.0, 30.0)
    gtt, dgtt, gxx, dgxx = m.evaluate(4.2)
    assert gtt == pytest.approx(1.84) and dgtt == pytest.approx(0.2) and dgxx == pytest.approx(0.0)
    a = integrate(m, 5.0, 0.0, 2.0, 1e-3)
    b = integrate(RAMP, 5.0, 0.0, 2.0, 1e-3)
    assert np.max(np.abs(a.x - b.x)) < 1e-9


def test_drift_warning_on_coarse_step():
    curved = Metric1D.from_expressions("exp(x^2)", "1 + x^2")
    with pytest.warns(InvariantDriftWarning):
        integrate(curved, 0.5, 0.5, 2.0, 0.5, tol=1e-14)


def test_interval_residual_and_worldline():
    s = launch(RAMP, 3.0, 0.4)
    assert abs(interval_residual(RAMP, s)) < 1e-14
    wl = integrate(FLAT, 0.0, 0.6, 1.0, 0.01).to_worldline()
    np.testing.assert_allclose(wl.v, 0.6, atol=1e-13)


def test_csv(tmp_path):
    p = integrate(FLAT, 0.0, 0.6, 0.1, 0.05).to_csv(tmp_path / "g.csv")
    lines = p.read_text().splitlines()
    assert lines[0] == "tau,x,t,ux,ut,interval_residual"
    assert len(lines) == 4


def test_nonunit_c():
    conv = Conventions(c=3.0)
    s = launch(FLAT, 0.0, 1.8, conv)
    w = math.sqrt(1 - 0.36)
    assert s.ut == pytest.approx(1 / w) and s.ux == pytest.approx(1.8 / w)
    path = integrate(FLAT, 0.0, 1.8, 1.0, 0.01, conv)
    assert np.max(np.abs(path.interval_residual)) < 1e-12
