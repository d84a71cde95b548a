import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from relwave.errors import VelocityOutOfRange
from relwave.kinematics import (
    Conventions,
    energy_expansion,
    energy_momentum,
    expansion_coefficient,
    lorentz_factor,
)

velocities = st.floats(min_value=-0.999, max_value=0.999, allow_nan=False)


def test_lorentz_factor_examples():
    assert lorentz_factor(0.0) == 1.0
    assert lorentz_factor(0.6) == pytest.approx(0.8, abs=1e-15)
    with pytest.raises(VelocityOutOfRange):
        lorentz_factor(1.0)
    with pytest.raises(VelocityOutOfRange):
        lorentz_factor(-1.5)


def test_lorentz_factor_array_and_guard():
    w = lorentz_factor(np.array([0.0, 0.6]))
    assert isinstance(w, np.ndarray)
    np.testing.assert_allclose(w, [1.0, 0.8])
    with pytest.raises(VelocityOutOfRange):
        lorentz_factor(np.array([0.1, 0.99999]), guard=1e-3)
    # a looser guard admits it
    assert lorentz_factor(0.99999, guard=1e-6) > 0


def test_energy_momentum_examples():
    k = energy_momentum(0.6)
    assert k.E == pytest.approx(1.25, abs=1e-15)
    assert k.p == pytest.approx(0.75, abs=1e-15)
    assert (k.E / k.c) ** 2 - k.p ** 2 == pytest.approx(1.0, abs=1e-14)
    r = energy_momentum(0.0)
    assert (r.E, r.p) == (1.0, 0.0)


@given(velocities, st.sampled_from([0.5, 1.0, 3.0]))
def test_kinematic_identities(u, c):
    v = u * c
    k = energy_momentum(v, Conventions(c=c))
    assert 0 < k.w <= 1
    assert k.E * k.w == pytest.approx(c ** 2, rel=1e-14)
    assert k.p * k.w == pytest.approx(v, rel=1e-14, abs=1e-300)
    assert abs(k.dispersion_defect) <= 1e-12 * (k.E / c) ** 2


def test_expansion_coefficients():
    assert [expansion_coefficient(k) for k in range(4)] == [1.0, 0.5, 0.375, 0.3125]


def test_energy_expansion_examples():
    assert energy_expansion(0.0, order=7) == 1.0
    assert energy_expansion(0.6, order=1) == pytest.approx(1.18, abs=1e-15)
    assert energy_expansion(0.6, order=200) == pytest.approx(1.25, rel=1e-13)


@given(st.floats(min_value=1e-3, max_value=0.95))
def test_energy_expansion_monotone_from_below(v):
    exact = 1.0 / math.sqrt(1 - v * v)
    sums = [energy_expansion(v, order=n) for n in range(12)]
    assert all(b >= a for a, b in zip(sums, sums[1:]))
    assert sums[-1] <= exact * (1 + 1e-15)


def test_conventions_validation_and_roundtrip():
    c = Conventions(c=2.0, energy_sign=-1)
    assert Conventions.from_dict(c.to_dict()) == c
    assert c.with_signs(spatial_sign=-1).spatial_sign == -1
    assert c.v_max == pytest.approx(2.0 * (1 - 1e-9))
    for bad in ({"c": 0}, {"hbar_m": -1}, {"energy_sign": 2}, {"spatial_sign": 0}, {"velocity_guard": 1.0}):
        with pytest.raises(ValueError):
            Conventions(**bad)
