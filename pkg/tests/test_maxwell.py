import math

import numpy as np
import pytest

from relwave.errors import CourantViolation
from relwave.maxwell import (
    EMFieldPair,
    discrete_energy,
    evolve_step,
    maxwell_residual,
    null_decomposition_check,
    run,
    shape_error,
    snapshot_csv,
    wave_equation_check,
)


def gauss(L, sigma, c=1.0, sign=1):
    def f(x, t):
        s = np.mod(x - sign * c * t - 0.5 * L, L) - 0.5 * L
        return np.exp(-(s ** 2) / (2 * sigma ** 2))

    return f


def _residual_pair(n, staggered, sign):
    h = 1.0 / n
    x = h * np.arange(n)
    k = 2 * math.pi
    off = h / 2 if staggered else 0.0
    f = lambda x, t: np.sin(k * (x - sign * t))  # noqa: E731
    ft = lambda x, t: -sign * k * np.cos(k * (x - sign * t))  # noqa: E731
    F = EMFieldPair(sign * f(x + off, 0), f(x, 0), h, staggered=staggered)
    D = EMFieldPair(sign * ft(x + off, 0), ft(x, 0), h, staggered=staggered)
    return maxwell_residual(F, D)


def test_null_decomposition_reexport():
    assert null_decomposition_check().passed


@pytest.mark.parametrize("staggered", [True, False])
@pytest.mark.parametrize("sign", [1, -1])
def test_movers_satisfy_first_order_pair_at_second_order(staggered, sign):
    errs = [_residual_pair(n, staggered, sign).max_abs for n in (64, 128, 256, 512)]
    order = -np.polyfit(np.log([64, 128, 256, 512]), np.log(errs), 1)[0]
    assert order == pytest.approx(2.0, abs=0.1)


def test_sign_flipped_form_fails_on_right_mover():
    r = _residual_pair(256, True, 1)
    assert r.flipped_max_abs == pytest.approx(2 * 2 * math.pi, rel=1e-3)
    np.testing.assert_allclose(r.mapping_faraday, r.r2)
    np.testing.assert_allclose(r.mapping_ampere, r.r1)


def test_static_field_residual_is_gradient():
    n, h = 64, 1 / 64
    x = h * np.arange(n)
    F = EMFieldPair(np.sin(2 * np.pi * x), np.zeros(n), h, staggered=False)
    Z = EMFieldPair(np.zeros(n), np.zeros(n), h, staggered=False)
    r = maxwell_residual(F, Z)
    np.testing.assert_allclose(r.r1, (np.roll(F.psi1, -1) - np.roll(F.psi1, 1)) / (2 * h))
    assert r.max_abs > 1


def test_crossing_shape_error():
    n, L = 512, 1.0
    dx = L / n
    dt = 0.5 * dx
    f = gauss(L, 0.03 * L)
    res = run(EMFieldPair.from_functions(f, f, n, dx, 1.0, dt), dt, 2 * n)
    assert res.final.t == pytest.approx(L)
    assert shape_error(res.final, f, f) < 1e-2


def test_left_mover():
    n, L = 512, 1.0
    dx = L / n
    dt = 0.5 * dx
    f = gauss(L, 0.03, sign=-1)
    g = lambda x, t: -f(x, t)  # noqa: E731
    res = run(EMFieldPair.from_functions(g, f, n, dx, 1.0, dt), dt, n)
    assert shape_error(res.final, g, f) < 1e-2


def test_energy_conservation_long_run():
    n = 512
    dx = 1.0 / n
    dt = 0.5 * dx
    f = gauss(1.0, 0.03)
    res = run(EMFieldPair.from_functions(f, f, n, dx, 1.0, dt), dt, 10_000)
    assert res.energy_drift <= 1e-6
    assert res.naive_energy_drift <= 1e-6


def test_unprimed_start_is_primed():
    n = 128
    dx = 1 / n
    x = dx * np.arange(n)
    e = np.exp(-((x - 0.5) ** 2) / 0.005)
    fp = EMFieldPair(np.zeros(n), e, dx)
    nxt = evolve_step(fp, 0.5 * dx)
    assert nxt.psi1_t - nxt.t == pytest.approx(0.25 * dx)
    assert np.all(np.isfinite(nxt.psi2))


def test_zero_fields_stay_zero():
    z = EMFieldPair(np.zeros(32), np.zeros(32), 0.1)
    out = run(z, 0.05, 10)
    assert not out.final.psi1.any() and not out.final.psi2.any()


def test_courant_violation():
    z = EMFieldPair(np.zeros(32), np.zeros(32), 0.1)
    with pytest.raises(CourantViolation):
        evolve_step(z, 0.11)


def test_vacuum_speed_derived():
    eps0, mu0 = 8.8541878128e-12, 1.25663706212e-6
    fp = EMFieldPair.vacuum(np.zeros(8), np.zeros(8), 1.0, eps0, mu0)
    assert fp.c == pytest.approx(299792458.0, rel=1e-9)
    with pytest.raises(TypeError):
        EMFieldPair.vacuum(np.zeros(8), np.zeros(8), 1.0, eps0, mu0, c=3.0)


def test_wave_equation_standing_wave_refinement():
    def resid(n):
        dx = 1.0 / n
        x = dx * np.arange(n)
        k = 2 * np.pi
        dt = 0.5 * dx
        hist = [
            EMFieldPair(-np.cos(k * (x + dx / 2)) * np.sin(k * (j * dt + dt / 2)), np.sin(k * x) * np.cos(k * j * dt), dx, t=j * dt, psi1_t=j * dt + dt / 2)
            for j in range(5)
        ]
        return wave_equation_check(hist).max_residual

    r = [resid(n) for n in (32, 64, 128)]
    assert r[0] / r[1] == pytest.approx(4.0, rel=0.05)
    assert r[1] / r[2] == pytest.approx(4.0, rel=0.05)


def test_wave_equation_evolved_and_constant():
    n = 256
    dx = 1 / n
    dt = 0.5 * dx
    f = gauss(1.0, 0.05)
    hist = run(EMFieldPair.from_functions(f, f, n, dx, 1.0, dt), dt, 6, store_every=1).history
    assert wave_equation_check(hist).max_residual < 1e-6 * (1 / 0.05 ** 2)
    const = [EMFieldPair(np.full(8, 2.0), np.full(8, -1.0), 0.1, t=0.05 * j) for j in range(3)]
    assert wave_equation_check(const).max_residual == 0.0
    with pytest.raises(ValueError):
        wave_equation_check(const[:2])


def test_discrete_energy_invariant_exact(rng):
    n = 64
    fp = EMFieldPair(rng.normal(size=n), rng.normal(size=n), 1 / n)
    dt = 0.9 / n
    e0 = None
    for _ in range(200):
        fp = evolve_step(fp, dt)
        e = discrete_energy(fp, dt)
        e0 = e if e0 is None else e0
        assert e == pytest.approx(e0, rel=1e-12)


def test_snapshot(tmp_path):
    fp = EMFieldPair(np.zeros(4), np.ones(4), 0.25)
    text = snapshot_csv(tmp_path / "s.csv", fp).read_text().splitlines()
    assert text[0] == "x,x_psi1,psi1,psi2" and len(text) == 5
