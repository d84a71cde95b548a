import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from relwave.expression import Expression, ExpressionError


def test_values_and_derivatives():
    e = Expression("1 + 0.2*x")
    assert e.evaluate(0.0) == (1.0, 0.2)
    e = Expression("exp(-x^2) * sqrt(1 + x^2) / (2 + log(1 + x*x))")
    for x in (-1.3, 0.0, 0.7, 2.5):
        h = 1e-6
        fd = (e(x + h) - e(x - h)) / (2 * h)
        assert e.derivative(x) == pytest.approx(fd, rel=1e-7, abs=1e-9)


def test_constants_and_unary():
    assert Expression("pi")(3.0) == pytest.approx(math.pi)
    assert Expression("-e")(0.0) == pytest.approx(-math.e)
    assert Expression("3").derivative(1.0) == 0.0


def test_vectorized():
    e = Expression("x**3")
    x = np.linspace(-1, 1, 5)
    f, df = e.evaluate(x)
    np.testing.assert_allclose(f, x ** 3)
    np.testing.assert_allclose(df, 3 * x ** 2)


@pytest.mark.parametrize("bad", ["import os", "x.real", "sin(x)", "x +", "__import__('os')", "y + 1", "[1, 2]"])
def test_rejects_outside_grammar(bad):
    with pytest.raises(ExpressionError):
        Expression(bad)


@given(st.floats(-3, 3), st.floats(-2, 2), st.floats(0.1, 2))
def test_polynomial_derivative_property(x, a, b):
    e = Expression(f"{a!r}*x^2 + {b!r}*x")
    assert e.derivative(x) == pytest.approx(2 * a * x + b, rel=1e-12, abs=1e-12)
