"""Stationary 1+1D metrics and a fixed-step geodesic integrator.

With t' = jct the stationary geodesic system becomes, in real time,

    d(ux)/dtau = -[g_xx' ux^2 + c^2 g_tt' ut^2] / (2 g_xx)
    d(ut)/dtau = -(g_tt'/g_tt) ux ut            (first integral g_tt ut = kappa0)
    g_xx ux^2 - c^2 g_tt ut^2 = -c^2            (interval invariant)
    ux^2 = (c^2/g_xx) (kappa0^2/g_tt - 1)       (closed form for the speed)

where ux = dx/dtau, ut = dt/dtau, and kappa0 = k0/(jc) is the real
integration constant (kappa0 = 1/w in flat space).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvariantDriftWarning, MetricDomainError, VelocityOutOfRange
from .expression import Expression
from .io import write_csv
from .kinematics import Conventions, check_velocity


class TableProfile:
    """Sampled profile with linear interpolation and central-difference slope."""

    def __init__(self, xs, values):
        xs = np.asarray(xs, dtype=float)
        values = np.asarray(values, dtype=float)
        if xs.ndim != 1 or xs.shape != values.shape or len(xs) < 2:
            raise ValueError("table profile needs matching 1-D arrays of length >= 2")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("table abscissae must be strictly increasing")
        self.xs = xs
        self.values = values
        self.h = float(np.min(np.diff(xs)))

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        val = np.interp(x, self.xs, self.values)
        lo = np.maximum(x - self.h, self.xs[0])
        hi = np.minimum(x + self.h, self.xs[-1])
        der = (np.interp(hi, self.xs, self.values) - np.interp(lo, self.xs, self.values)) / (hi - lo)
        if x.ndim == 0:
            return float(val), float(der)
        return val, der

    @property
    def domain(self):
        return float(self.xs[0]), float(self.xs[-1])


def _as_profile(spec):
    if isinstance(spec, (Expression, TableProfile)):
        return spec
    if isinstance(spec, (int, float)):
        return Expression(repr(float(spec)))
    if isinstance(spec, str):
        return Expression(spec)
    raise TypeError(f"cannot build a metric profile from {spec!r}")


@dataclass(frozen=True)
class Metric1D:
    """Time-independent metric coefficients g_tt(x), g_xx(x)."""

    g_tt: object
    g_xx: object
    domain: tuple = (-math.inf, math.inf)

    @classmethod
    def flat(cls) -> "Metric1D":
        return cls(Expression("1"), Expression("1"))

    @classmethod
    def from_expressions(cls, g_tt, g_xx="1", domain=(-math.inf, math.inf)) -> "Metric1D":
        return cls(_as_profile(g_tt), _as_profile(g_xx), tuple(domain))

    @classmethod
    def from_table(cls, xs, g_tt, g_xx) -> "Metric1D":
        tt, xx = TableProfile(xs, g_tt), TableProfile(xs, g_xx)
        return cls(tt, xx, tt.domain)

    def evaluate(self, x: float):
        """Return (g_tt, dg_tt/dx, g_xx, dg_xx/dx) at x, validating the domain."""
        x = float(x)
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise MetricDomainError(f"x={x!r} outside metric domain [{lo}, {hi}]")
        gtt, dgtt = self.g_tt.evaluate(x)
        gxx, dgxx = self.g_xx.evaluate(x)
        if not (gtt > 0 and gxx > 0):
            raise MetricDomainError(f"metric not positive at x={x!r}: g_tt={gtt!r}, g_xx={gxx!r}")
        return gtt, dgtt, gxx, dgxx


@dataclass(frozen=True)
class GeodesicState:
    x: float
    t: float
    ux: float
    ut: float
    tau: float
    kappa0: float


def interval_residual(metric: Metric1D, state: GeodesicState, c: float = 1.0) -> float:
    """g_xx ux^2 - c^2 g_tt ut^2 + c^2 (zero along a geodesic)."""
    gtt, _, gxx, _ = metric.evaluate(state.x)
    return gxx * state.ux ** 2 - c ** 2 * gtt * state.ut ** 2 + c ** 2


def launch(metric: Metric1D, x0: float, v0: float, conv: Conventions = Conventions()) -> GeodesicState:
    """Start a world line at x0 with coordinate velocity dx/dt = v0.

    ut follows from the interval constraint at x0; sign(ux) = sign(v0).
    """
    check_velocity(v0, conv.c, conv.velocity_guard)
    gtt, _, gxx, _ = metric.evaluate(x0)
    c2 = conv.c ** 2
    denom = c2 * gtt - gxx * v0 ** 2
    if not denom > 0:
        raise VelocityOutOfRange(f"v0={v0!r} is not timelike at x0={x0!r} (local light speed {conv.c * math.sqrt(gtt / gxx)!r})")
    ut = conv.c / math.sqrt(denom)
    return GeodesicState(x=float(x0), t=0.0, ux=v0 * ut, ut=ut, tau=0.0, kappa0=gtt * ut)


def _rhs(y, metric, c2, kappa0, use_first_integral):
    x, ux = y[0], y[1]
    gtt, dgtt, gxx, dgxx = metric.evaluate(x)
    ut = kappa0 / gtt if use_first_integral else y[3]
    dux = -(dgxx * ux * ux + c2 * dgtt * ut * ut) / (2.0 * gxx)
    out = [ux, dux, ut]
    if not use_first_integral:
        out.append(-(dgtt / gtt) * ux * ut)
    return np.array(out)


TIME_EQUATIONS = ("first_integral", "geodesic")


def step(
    state: GeodesicState,
    metric: Metric1D,
    dtau: float,
    conv: Conventions = Conventions(),
    time_equation: str = "first_integral",
    tol: float = 1e-8,
) -> GeodesicState:
    """Advance one classical RK4 step in proper time.

    ``time_equation="first_integral"`` drives t with dt/dtau = kappa0/g_tt;
    ``"geodesic"`` integrates ut from the second geodesic equation instead,
    which makes conservation of g_tt*ut a genuine check.
    """
    if not dtau > 0:
        raise ValueError("dtau must be positive")
    if time_equation not in TIME_EQUATIONS:
        raise ValueError(f"time_equation must be one of {TIME_EQUATIONS}")
    first = time_equation == "first_integral"
    c2 = conv.c ** 2
    y = np.array([state.x, state.ux, state.t] + ([] if first else [state.ut]))
    f = lambda yy: _rhs(yy, metric, c2, state.kappa0, first)  # noqa: E731
    k1 = f(y)
    k2 = f(y + 0.5 * dtau * k1)
    k3 = f(y + 0.5 * dtau * k2)
    k4 = f(y + dtau * k3)
    y = y + (dtau / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    x, ux, t = float(y[0]), float(y[1]), float(y[2])
    gtt = metric.evaluate(x)[0]
    ut = state.kappa0 / gtt if first else float(y[3])
    new = replace(state, x=x, ux=ux, t=t, ut=ut, tau=state.tau + dtau)
    resid = interval_residual(metric, new, conv.c)
    if abs(resid) > tol * c2:
        warnings.warn(f"interval residual {resid:.3e} at tau={new.tau:.6g}", InvariantDriftWarning, stacklevel=2)
    return new


@dataclass
class GeodesicPath:
    """Sampled world line plus per-sample invariant diagnostics."""

    tau: np.ndarray
    x: np.ndarray
    t: np.ndarray
    ux: np.ndarray
    ut: np.ndarray
    interval_residual: np.ndarray
    kappa_drift: np.ndarray
    closed_form_ux2: np.ndarray
    kappa0: float

    @property
    def ux2_mismatch(self) -> np.ndarray:
        """|ux^2 integrated - ux^2 from the closed-form speed relation|."""
        return np.abs(self.ux ** 2 - self.closed_form_ux2)

    @property
    def ux_mismatch(self) -> np.ndarray:
        predicted = np.sign(self.ux) * np.sqrt(np.clip(self.closed_form_ux2, 0.0, None))
        return np.abs(self.ux - predicted)

    def to_worldline(self):
        """Coordinate-time world line (t, x, v=dx/dt) for the action module."""
        from .action import WorldLine

        return WorldLine(t=self.t.copy(), x=self.x.copy(), v=self.ux / self.ut)

    def to_csv(self, path):
        return write_csv(
            path,
            {
                "tau": self.tau,
                "x": self.x,
                "t": self.t,
                "ux": self.ux,
                "ut": self.ut,
                "interval_residual": self.interval_residual,
            },
        )


def integrate(
    metric: Metric1D,
    x0: float,
    v0: float,
    tau_end: float,
    dtau: float,
    conv: Conventions = Conventions(),
    time_equation: str = "first_integral",
    tol: float = 1e-8,
) -> GeodesicPath:
    """Integrate from launch to tau_end with a fixed step (rounded to fit)."""
    n = max(1, int(round(tau_end / dtau)))
    h = tau_end / n
    state = launch(metric, x0, v0, conv)
    rows = [state]
    for _ in range(n):
        state = step(state, metric, h, conv, time_equation, tol)
        rows.append(state)
    c2 = conv.c ** 2
    x = np.array([s.x for s in rows])
    ux = np.array([s.ux for s in rows])
    ut = np.array([s.ut for s in rows])
    gtt = np.array([metric.evaluate(xi)[0] for xi in x])
    gxx = np.array([metric.evaluate(xi)[2] for xi in x])
    k0 = rows[0].kappa0
    return GeodesicPath(
        tau=np.array([s.tau for s in rows]),
        x=x,
        t=np.array([s.t for s in rows]),
        ux=ux,
        ut=ut,
        interval_residual=gxx * ux ** 2 - c2 * gtt * ut ** 2 + c2,
        kappa_drift=np.abs(gtt * ut - k0) / abs(k0),
        closed_form_ux2=(c2 / gxx) * (k0 ** 2 / gtt - 1.0),
        kappa0=k0,
    )
