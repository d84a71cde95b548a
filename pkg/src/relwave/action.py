"""Phase accumulation along world lines and numerical least-action checks.

Along a world line (t, x(t), v(t)) the local energy carries a potential,
E(x) = c^2/w(x) - V(x), and the wave phase accumulates as

    phi = -(eps/hbar) int E dt + (s/hbar) int p dx,     p = v/w.

To leading order in v/c the temporal part is -(eps/hbar)(c^2 T + S) with
S = int (v^2/2 - V) dt the classical action.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import NegativeEnergy, NonTimelike, RelaxationFailure, VelocityOutOfRange
from .expression import Expression
from .io import write_csv, write_json
from .kinematics import Conventions, check_velocity, lorentz_factor


@dataclass
class WorldLine:
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.x = np.asarray(self.x, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        if not (self.t.shape == self.x.shape == self.v.shape) or self.t.ndim != 1 or len(self.t) < 2:
            raise ValueError("t, x, v must be 1-D arrays of equal length >= 2")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("t must be strictly increasing")

    @classmethod
    def straight(cls, t0: float, x0: float, t1: float, x1: float, n: int = 101) -> "WorldLine":
        t = np.linspace(t0, t1, n)
        v = (x1 - x0) / (t1 - t0)
        return cls(t, x0 + v * (t - t0), np.full(n, v))

    @classmethod
    def from_path(cls, t, x) -> "WorldLine":
        """Velocities by second-order finite differences."""
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        return cls(t, x, np.gradient(x, t, edge_order=2))

    def segment(self, i0: int, i1: int) -> "WorldLine":
        """Samples i0..i1 inclusive."""
        return WorldLine(self.t[i0 : i1 + 1], self.x[i0 : i1 + 1], self.v[i0 : i1 + 1])

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])


class Potential1D:
    """V(x) per unit mass, with V'(x); closed form or any vectorized callable."""

    def __init__(self, V, dV=None, text: str | None = None):
        if isinstance(V, (str, int, float)):
            expr = Expression(str(V))
            self._V, self._dV, self.text = expr, expr.derivative, expr.text
        else:
            self._V, self._dV, self.text = V, dV, text
        self.is_zero = self._is_identically_zero()

    def _is_identically_zero(self) -> bool:
        probe = np.linspace(-3.0, 3.0, 13)
        try:
            return bool(np.all(self.V(probe) == 0) and np.all(self.dV(probe) == 0))
        except (ValueError, ZeroDivisionError, FloatingPointError):
            return False

    @classmethod
    def free(cls) -> "Potential1D":
        return cls("0")

    def V(self, x):
        return np.broadcast_to(np.asarray(self._V(x), dtype=float), np.shape(x)).copy()

    def dV(self, x):
        if self._dV is not None:
            return np.broadcast_to(np.asarray(self._dV(x), dtype=float), np.shape(x)).copy()
        h = 1e-6 * max(1.0, float(np.max(np.abs(x))))
        return (self.V(np.asarray(x) + h) - self.V(np.asarray(x) - h)) / (2 * h)

    def d2V(self, x):
        x = np.asarray(x, dtype=float)
        h = 1e-5 * max(1.0, float(np.max(np.abs(x))))
        return (self.dV(x + h) - self.dV(x - h)) / (2 * h)


@dataclass(frozen=True)
class PhaseBreakdown:
    phi_total: float
    phi_temporal: float
    phi_spatial: float
    action: float
    duration: float
    phi_temporal_expanded: float

    @property
    def relativistic_remainder(self) -> float:
        """phi_temporal minus its leading-order expansion (O(v^4) per unit time)."""
        return self.phi_temporal - self.phi_temporal_expanded


def _trapz(y, x) -> float:
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))


def phase_along(line: WorldLine, pot: Potential1D | None = None, conv: Conventions = Conventions()) -> PhaseBreakdown:
    pot = Potential1D.free() if pot is None else pot
    try:
        w = lorentz_factor(line.v, conv.c, conv.velocity_guard)
    except VelocityOutOfRange as exc:
        raise NonTimelike(str(exc)) from None
    V = pot.V(line.x)
    E = conv.c ** 2 / w - V
    if np.any(E <= 0):
        i = int(np.argmin(E))
        raise NegativeEnergy(f"E = c^2/w - V = {E[i]!r} <= 0 at x={line.x[i]!r}")
    p = line.v / w
    eps, s, h = conv.energy_sign, conv.spatial_sign, conv.hbar_m
    phi_t = -eps * _trapz(E, line.t) / h
    phi_s = s * _trapz(p, line.x) / h
    action = _trapz(0.5 * line.v ** 2 - V, line.t)
    T = line.duration
    return PhaseBreakdown(
        phi_total=phi_t + phi_s,
        phi_temporal=phi_t,
        phi_spatial=phi_s,
        action=action,
        duration=T,
        phi_temporal_expanded=-eps * (conv.c ** 2 * T + action) / h,
    )


def pseudo_particle_pair(line: WorldLine, pot: Potential1D | None = None, conv: Conventions = Conventions()):
    """Breakdowns for s = +1 and s = -1 (opposite spatial phases)."""
    return phase_along(line, pot, conv.with_signs(spatial_sign=1)), phase_along(line, pot, conv.with_signs(spatial_sign=-1))


# --- least action -------------------------------------------------------------


def discrete_action(t: np.ndarray, x: np.ndarray, pot: Potential1D) -> np.ndarray:
    """Action of piecewise-linear path(s); ``x`` may be (n,) or (m, n).

    Kinetic term exact per segment, potential by the trapezoid rule.
    """
    dt = np.diff(t)
    dx = np.diff(x, axis=-1)
    kinetic = 0.5 * np.sum(dx ** 2 / dt, axis=-1)
    V = pot.V(x)
    potential = np.sum(0.5 * (V[..., 1:] + V[..., :-1]) * dt, axis=-1)
    return kinetic - potential


def _action_gradient(x, h, pot):
    g = (2 * x[1:-1] - x[:-2] - x[2:]) / h - h * pot.dV(x[1:-1])
    return g


def relax_extremal(t0, x0, t1, x1, pot: Potential1D, n: int = 201, tol: float = 1e-10, max_iter: int = 200) -> np.ndarray:
    """Solve the discrete Euler-Lagrange equations by damped Newton iteration.

    Interior equations: (x[i+1] - 2 x[i] + x[i-1]) / h^2 = -V'(x[i]).
    Raises RelaxationFailure after ``max_iter`` iterations.
    """
    t = np.linspace(t0, t1, n)
    h = t[1] - t[0]
    x = x0 + (x1 - x0) * (t - t0) / (t1 - t0)
    g = _action_gradient(x, h, pot)
    for _ in range(max_iter):
        gnorm = np.max(np.abs(g))
        if gnorm <= tol:
            return x
        m = n - 2
        ab = np.zeros((3, m))
        ab[0, 1:] = -1.0 / h
        ab[1, :] = 2.0 / h - h * pot.d2V(x[1:-1])
        ab[2, :-1] = -1.0 / h
        try:
            delta = solve_banded((1, 1), ab, -g)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise RelaxationFailure(f"Newton system singular: {exc}") from None
        lam = 1.0
        while lam > 1e-6:
            trial = x.copy()
            trial[1:-1] += lam * delta
            g_trial = _action_gradient(trial, h, pot)
            if np.all(np.isfinite(g_trial)) and np.max(np.abs(g_trial)) < gnorm:
                break
            lam *= 0.5
        else:
            raise RelaxationFailure(f"line search stalled at residual {gnorm:.3e}")
        x, g = trial, g_trial
    if np.max(np.abs(g)) <= tol:
        return x
    raise RelaxationFailure(f"no convergence in {max_iter} iterations (residual {np.max(np.abs(g)):.3e})")


@dataclass
class LeastActionReport:
    t: np.ndarray
    reference: np.ndarray
    reference_action: float
    actions: np.ndarray
    amplitude_norms: np.ndarray
    seed: int
    free: bool
    extras: dict = field(default_factory=dict)

    @property
    def excess(self) -> np.ndarray:
        return self.actions - self.reference_action

    @property
    def all_larger(self) -> bool:
        return bool(np.all(self.excess > 0))

    def summary(self) -> dict:
        return {
            "reference_action": self.reference_action,
            "n_perturbations": int(len(self.actions)),
            "min_action": float(np.min(self.actions)),
            "max_action": float(np.max(self.actions)),
            "mean_action": float(np.mean(self.actions)),
            "min_excess": float(np.min(self.excess)),
            "seed": self.seed,
            "reference_path": "straight line" if self.free else "relaxed discrete extremal",
            "verdict": "pass" if self.all_larger else "fail",
            **self.extras,
        }

    def to_csv(self, path):
        return write_csv(
            path,
            {
                "perturbation_id": np.arange(len(self.actions)),
                "amplitude_norm": self.amplitude_norms,
                "action": self.actions,
                "excess_over_reference": self.excess,
            },
        )

    def to_json(self, path):
        return write_json(path, self.summary())


def sine_perturbations(t, n_paths: int, rng, n_modes: int = 5, scale: float = 0.05):
    """Fixed-endpoint bumps sum_k a_k sin(k pi (t - t0)/T), a_k ~ U(-1, 1) scale/k."""
    T = t[-1] - t[0]
    k = np.arange(1, n_modes + 1)
    amps = rng.uniform(-1.0, 1.0, size=(n_paths, n_modes)) * scale / k
    phase = np.pi * np.outer(k, t - t[0]) / T
    shapes = amps @ np.sin(phase)
    slopes = amps @ (np.cos(phase) * (np.pi * k / T)[:, None])
    shapes[:, 0] = 0.0
    shapes[:, -1] = 0.0
    return amps, shapes, slopes


def least_action_check(
    pot: Potential1D | None,
    endpoints,
    n_perturbations: int = 100,
    seed: int = 0,
    n_samples: int = 201,
    n_modes: int = 5,
    scale: float | None = None,
    conv: Conventions = Conventions(),
) -> LeastActionReport:
    """Compare the reference path's action against seeded perturbed paths.

    Perturbation amplitudes are shrunk per path when needed so every
    perturbed velocity stays below 0.9 c.
    """
    pot = Potential1D.free() if pot is None else pot
    (t0, x0), (t1, x1) = endpoints
    if not t1 > t0:
        raise ValueError("endpoints must be ordered in time")
    try:
        check_velocity((x1 - x0) / (t1 - t0), conv.c, conv.velocity_guard)
    except VelocityOutOfRange as exc:
        raise NonTimelike(str(exc)) from None
    t = np.linspace(t0, t1, n_samples)
    if pot.is_zero:
        ref = x0 + (x1 - x0) * (t - t0) / (t1 - t0)
    else:
        ref = relax_extremal(t0, x0, t1, x1, pot, n_samples)
    v_ref = np.diff(ref) / np.diff(t)
    vmax = 0.9 * conv.c
    if np.max(np.abs(v_ref)) >= vmax:
        raise NonTimelike("reference path exceeds 0.9 c")
    rng = np.random.default_rng(seed)
    if scale is None:
        scale = 0.05 * max(abs(x1 - x0), conv.c * (t1 - t0))
    amps, shapes, slopes = sine_perturbations(t, n_perturbations, rng, n_modes, scale)
    room = vmax - np.max(np.abs(v_ref))
    peak = np.max(np.abs(slopes), axis=1)
    shrink = np.where(peak > room, room / np.where(peak > 0, peak, 1.0), 1.0)
    amps = amps * shrink[:, None]
    shapes = shapes * shrink[:, None]
    paths = ref[None, :] + shapes
    return LeastActionReport(
        t=t,
        reference=ref,
        reference_action=float(discrete_action(t, ref, pot)),
        actions=discrete_action(t, paths, pot),
        amplitude_norms=np.linalg.norm(amps, axis=1),
        seed=seed,
        free=pot.is_zero,
    )
