import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relwave.errors import CourantViolation, ResolutionError, VelocityOutOfRange
from relwave.evolve import (
    PacketSpec,
    build_packet,
    continuum_frequency,
    density_history,
    dirac_plane_wave,
    discrete_frequency,
    fit_velocity,
    group_velocity,
    history_csv,
    momentum_centroid,
    run_dirac,
    run_schrodinger,
    snapshot_csv,
    step_dirac,
    step_schrodinger,
)
from relwave.grid import GridField
from relwave.dirac import spinor
from relwave.kinematics import Conventions
from relwave.planewave import PlaneWave, schrodinger_residual

N, DX, X0 = 1600, 0.05, -40.0


def moving_packet(v=0.6, conv=Conventions(), x_center=-20.0, width=2.0):
    return build_packet(PacketSpec(x_center, width, v, conv), N, DX, X0)


def test_rest_packet_is_real_gaussian():
    f = build_packet(PacketSpec(0.0, 2.0), N, DX, X0)
    assert f.norm == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(f.values.imag)) < 1e-12
    assert np.all(f.values.real > -1e-12)
    h = density_history(run_schrodinger(f, 0.01, 0))
    assert h["variance"][0] == pytest.approx(4.0, rel=1e-6)


@settings(max_examples=20, deadline=None)
@given(st.floats(-0.9, 0.9), st.floats(1.0, 3.0), st.floats(-10, 10), st.sampled_from([1, -1]))
def test_packet_norm_and_momentum(v, width, xc, s):
    conv = Conventions(spatial_sign=s)
    spec = PacketSpec(xc, width, v, conv)
    f = build_packet(spec, N, DX, X0)
    assert f.norm == pytest.approx(1.0, abs=1e-12)
    p = momentum_centroid(f, conv)
    if abs(spec.p_center) > 1e-3:
        assert p == pytest.approx(spec.p_center, rel=1e-2)
    else:
        assert abs(p) < 1e-3


def test_paired_packet_has_real_envelope():
    f = build_packet(PacketSpec(3.0, 2.0, 0.6, paired=True), N, DX, X0)
    assert np.max(np.abs(f.values.imag)) < 1e-12
    assert momentum_centroid(f) == pytest.approx(0.0, abs=1e-10)


def test_resolution_guards():
    with pytest.raises(ResolutionError, match="4 dx"):
        build_packet(PacketSpec(0.0, 0.1), N, DX, X0)
    with pytest.raises(ResolutionError, match="cutoff"):
        build_packet(PacketSpec(0.0, 0.5, 0.9999), 4000, 0.1, -200.0)
    with pytest.raises(ResolutionError, match="too short"):
        build_packet(PacketSpec(0.0, 2.0), 100, 0.1, -5.0)
    with pytest.raises(VelocityOutOfRange):
        PacketSpec(0.0, 1.0, 1.0)


@pytest.mark.parametrize("variant,factor", [("unit_kinetic", 2.0), ("textbook_half", 1.0)])
def test_schrodinger_norm_and_group_velocity(variant, factor):
    r = run_schrodinger(moving_packet(), 0.01, 1000, variant=variant, store_every=10)
    h = density_history(r)
    assert np.max(np.abs(h["total"] - 1.0)) <= 1e-10
    v, r2 = fit_velocity(h)
    assert group_velocity(0.75, variant) == factor * 0.75
    assert v == pytest.approx(factor * 0.75, rel=2e-2)
    assert r2 > 0.9999


def test_group_velocity_follows_spatial_sign():
    conv = Conventions(spatial_sign=-1)
    r = run_schrodinger(moving_packet(conv=conv, x_center=20.0), 0.01, 500, conv, store_every=10)
    v, _ = fit_velocity(density_history(r))
    assert v == pytest.approx(-1.5, rel=2e-2)


def test_rest_packet_spreads_in_place():
    f = build_packet(PacketSpec(0.0, 2.0), N, DX, X0)
    h = density_history(run_schrodinger(f, 0.01, 500, store_every=50))
    assert np.max(np.abs(h["centroid"])) < 1e-6 * N * DX
    assert np.all(np.diff(h["variance"]) > 0)
    # free Gaussian width law for the implemented coefficient: sigma^2 (1 + (K hbar t / sigma^2)^2)
    t = h["t"][-1]
    assert h["variance"][-1] == pytest.approx(4.0 * (1 + (t / 4.0) ** 2), rel=1e-3)


def test_rotating_frame_only_changes_phase():
    # the constant rest term commutes with the kinetic part; Crank-Nicolson
    # preserves that up to O(dt^2) per-mode phase differences
    f = moving_packet()
    a = run_schrodinger(f, 0.01, 100, store_every=100).final
    b = run_schrodinger(f, 0.01, 100, store_every=100, rotating_frame=True).final
    assert a.norm == pytest.approx(b.norm, abs=1e-12)
    np.testing.assert_allclose(np.abs(a.values), np.abs(b.values), atol=1e-3 * np.max(np.abs(a.values)))
    with pytest.raises(ValueError):
        step_schrodinger(f, 0.01, variant="nope")


def test_fourier_mode_phase_matches_discrete_dispersion():
    n, dx, dt, steps = 256, 0.1, 0.02, 50
    x = dx * np.arange(n)
    m = 5
    k = 2 * np.pi * m / (n * dx)
    f = GridField(0.0, dx, np.exp(1j * k * x))
    out = run_schrodinger(f, dt, steps, store_every=steps).final
    phase = -np.angle(out.values[0] / f.values[0])
    expect = discrete_frequency(k, dx, dt) * steps * dt
    assert np.angle(np.exp(1j * (phase - expect))) == pytest.approx(0.0, abs=1e-10)
    np.testing.assert_allclose(np.abs(out.values), 1.0, atol=1e-12)


def test_discrete_dispersion_converges_to_continuum():
    k = 0.75
    errs = [abs(discrete_frequency(k, dx, dx) - continuum_frequency(k)) for dx in (0.2, 0.1, 0.05)]
    assert np.log2(errs[0] / errs[1]) == pytest.approx(2.0, abs=0.1)
    assert np.log2(errs[1] / errs[2]) == pytest.approx(2.0, abs=0.1)
    # continuum relation is the zero set of the plane-wave residual
    assert schrodinger_residual(PlaneWave(float(continuum_frequency(k)), k)) == pytest.approx(0.0, abs=1e-15)


def test_two_component_norm():
    env = build_packet(PacketSpec(0.0, 2.0, 0.6), 800, DX, -20.0)
    u = spinor(0.6, 1, 1)
    f = GridField(env.x0, DX, np.array([u.u1 * env.values, u.u2 * env.values]))
    h = density_history(run_dirac(f, 0.01, 1000, store_every=100))
    assert np.max(np.abs(h["total"] - 1.0)) <= 1e-8


@pytest.mark.parametrize("branch", [1, -1])
def test_two_component_plane_wave_phase_rate(branch):
    f, E = dirac_plane_wave(800, DX, 3, branch)
    r = run_dirac(f, 0.01, 100, store_every=100)
    for comp in (0, 1):
        rate = -np.angle(r.final.values[comp, 7] / f.values[comp, 7]) / 1.0
        assert rate == pytest.approx(E, rel=1e-2)
    # stays a plane wave; the continuum spinor mixes slightly with the other branch on the grid
    np.testing.assert_allclose(np.abs(r.final.values), np.abs(f.values), atol=1e-3)
    assert np.ptp(np.abs(r.final.values[0])) < 1e-12


def test_zero_fields_and_errors():
    z = GridField(0.0, 0.1, np.zeros((2, 16)))
    assert not step_dirac(z, 0.05).values.any()
    assert not step_schrodinger(GridField(0.0, 0.1, np.zeros(16)), 0.05).values.any()
    with pytest.raises(CourantViolation):
        step_dirac(z, 0.2)
    with pytest.raises(ValueError):
        step_dirac(GridField(0.0, 0.1, np.zeros(16)), 0.05)
    with pytest.raises(ValueError):
        step_schrodinger(z, 0.05)


def test_outputs(tmp_path):
    r = run_schrodinger(moving_packet(), 0.01, 5)
    snapshot_csv(tmp_path / "a.csv", r.final)
    history_csv(tmp_path / "h.csv", density_history(r))
    r.to_json(tmp_path / "m.json")
    assert (tmp_path / "a.csv").read_text().splitlines()[0] == "x,re_psi,im_psi,abs2"
    meta = r.metadata()
    assert meta["scheme"] == "crank_nicolson/unit_kinetic" and meta["norm_relative_drift"] < 1e-12
    two = GridField(0.0, 0.1, np.ones((2, 4)))
    snapshot_csv(tmp_path / "b.csv", two)
    assert (tmp_path / "b.csv").read_text().splitlines()[0] == "x,re_psi1,im_psi1,re_psi2,im_psi2,density"
