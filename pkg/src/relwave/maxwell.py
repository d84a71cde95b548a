"""Massless two-component system and a staggered leapfrog field evolver.

With zero rest mass the pair reduces to a real first-order hyperbolic
system,

    (1/c) dPsi2/dt + dPsi1/dx = 0,
    (1/c) dPsi1/dt + dPsi2/dx = 0,

whose right movers have Psi1 = Psi2 and left movers Psi1 = -Psi2.  Psi1
plays the role of H and Psi2 of E.  The evolver is the usual 1D Yee
scheme: Psi2 on integer nodes and times, Psi1 on half nodes, shifted half
a step in time.

The sign-flipped variant with -(1/c) dPsi2/dt in the first equation is
elliptic (it implies d2/dt2 = -c^2 d2/dx2); its residual is reported
alongside as a measured discrepancy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dirac import null_decomposition_check  # noqa: F401  (re-exported)
from .errors import CourantViolation
from .io import write_csv, write_json


@dataclass
class EMFieldPair:
    """Real field pair on a periodic grid of ``n`` cells.

    ``psi2[i]`` sits at x0 + i*dx, time ``t``.  When ``staggered``,
    ``psi1[i]`` sits at x0 + (i + 1/2) dx and time ``psi1_t``; otherwise it
    is collocated with psi2.
    """

    psi1: np.ndarray
    psi2: np.ndarray
    dx: float
    c: float = 1.0
    t: float = 0.0
    psi1_t: float | None = None
    x0: float = 0.0
    staggered: bool = True
    boundary: str = "periodic"

    def __post_init__(self):
        self.psi1 = np.asarray(self.psi1, dtype=float)
        self.psi2 = np.asarray(self.psi2, dtype=float)
        if self.psi1.shape != self.psi2.shape or self.psi1.ndim != 1:
            raise ValueError("psi1 and psi2 must be 1-D arrays of equal length")
        if len(self.psi1) < 3:
            raise ValueError("need at least 3 grid points")
        if not self.dx > 0 or not self.c > 0:
            raise ValueError("dx and c must be positive")
        if self.boundary != "periodic":
            raise ValueError("only periodic boundaries are supported")
        if self.psi1_t is None:
            self.psi1_t = self.t

    @staticmethod
    def vacuum_speed(eps0: float, mu0: float) -> float:
        return 1.0 / math.sqrt(eps0 * mu0)

    @classmethod
    def vacuum(cls, psi1, psi2, dx, eps0: float, mu0: float, **kw) -> "EMFieldPair":
        """Field pair whose wave speed is derived as 1/sqrt(eps0 mu0)."""
        if "c" in kw:
            raise TypeError("c is derived from eps0 and mu0 and cannot be given")
        return cls(psi1, psi2, dx, c=cls.vacuum_speed(eps0, mu0), **kw)

    @classmethod
    def from_functions(cls, f1, f2, n: int, dx: float, c: float = 1.0, dt: float | None = None, x0: float = 0.0) -> "EMFieldPair":
        """Sample f1(x, t), f2(x, t) onto the staggered grid.

        psi2 at (x_i, 0); psi1 at (x_i + dx/2, dt/2), already primed for
        leapfrog steps of size ``dt`` (or at t=0 when ``dt`` is None).
        """
        x = x0 + dx * np.arange(n)
        t1 = 0.0 if dt is None else 0.5 * dt
        return cls(np.asarray(f1(x + 0.5 * dx, t1), dtype=float), np.asarray(f2(x, 0.0), dtype=float), dx, c, 0.0, t1, x0)

    @property
    def n(self) -> int:
        return len(self.psi2)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def x_half(self) -> np.ndarray:
        return self.x + (0.5 * self.dx if self.staggered else 0.0)

    @property
    def length(self) -> float:
        return self.n * self.dx

    def naive_energy(self) -> float:
        """sum(psi1^2 + psi2^2) dx, ignoring the time stagger."""
        return float(np.sum(self.psi1 ** 2 + self.psi2 ** 2) * self.dx)


def _forward(f, dx):
    return (np.roll(f, -1) - f) / dx


def _backward(f, dx):
    return (f - np.roll(f, 1)) / dx


def _centered(f, dx):
    return (np.roll(f, -1) - np.roll(f, 1)) / (2 * dx)


@dataclass
class MaxwellResidual:
    """Pointwise residuals; ``r1`` belongs to the dPsi2/dt equation."""

    r1: np.ndarray
    r2: np.ndarray
    flipped_r1: np.ndarray
    mapping_faraday: np.ndarray
    mapping_ampere: np.ndarray

    @property
    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.r1)), np.max(np.abs(self.r2))))

    @property
    def flipped_max_abs(self) -> float:
        return float(np.max(np.abs(self.flipped_r1)))


def maxwell_residual(fields: EMFieldPair, dfields_dt: EMFieldPair) -> MaxwellResidual:
    """Residuals of the hyperbolic pair from fields and their time derivatives.

    Spatial derivatives are second order: centered differences for
    collocated data, and compact differences across the half-node offset
    for staggered data (r1 evaluated at integer nodes, r2 at half nodes).
    ``flipped_r1`` is -(1/c) dPsi2/dt + dPsi1/dx, the sign-flipped form.
    The mapping residuals are the same two equations written in the
    dE/dx + mu dH/dt, dH/dx + eps dE/dt ordering (with c-normalized units).
    """
    c, dx = fields.c, fields.dx
    if fields.staggered:
        d_psi1 = _backward(fields.psi1, dx)  # at integer nodes
        d_psi2 = _forward(fields.psi2, dx)  # at half nodes
    else:
        d_psi1 = _centered(fields.psi1, dx)
        d_psi2 = _centered(fields.psi2, dx)
    r1 = dfields_dt.psi2 / c + d_psi1
    r2 = dfields_dt.psi1 / c + d_psi2
    return MaxwellResidual(
        r1=r1,
        r2=r2,
        flipped_r1=-dfields_dt.psi2 / c + d_psi1,
        mapping_faraday=d_psi2 + dfields_dt.psi1 / c,
        mapping_ampere=d_psi1 + dfields_dt.psi2 / c,
    )


def courant_number(fields: EMFieldPair, dt: float) -> float:
    return fields.c * dt / fields.dx


def prime(fields: EMFieldPair, dt: float) -> EMFieldPair:
    """Advance collocated-in-time psi1 by half a step so leapfrog can start."""
    if abs(fields.psi1_t - fields.t) > 1e-15 * max(1.0, abs(fields.t)):
        raise ValueError("psi1 is already offset in time")
    psi1 = fields.psi1 - 0.5 * fields.c * dt * _forward(fields.psi2, fields.dx)
    return replace(fields, psi1=psi1, psi1_t=fields.t + 0.5 * dt)


def evolve_step(fields: EMFieldPair, dt: float) -> EMFieldPair:
    """One leapfrog step: psi2 from t to t+dt, psi1 from t+dt/2 to t+3dt/2.

    Unprimed input (psi1 at the same time as psi2) is primed first.
    """
    if not fields.staggered:
        raise ValueError("the leapfrog evolver needs a staggered field pair")
    nu = courant_number(fields, dt)
    if nu > 1.0:
        raise CourantViolation(f"c*dt/dx = {nu:.6g} > 1")
    if abs(fields.psi1_t - fields.t) <= 1e-15 * max(1.0, abs(fields.t)):
        fields = prime(fields, dt)
    elif not math.isclose(fields.psi1_t - fields.t, 0.5 * dt, rel_tol=1e-9, abs_tol=1e-15):
        raise ValueError("psi1 time offset does not match dt/2")
    c, dx = fields.c, fields.dx
    psi2 = fields.psi2 - c * dt * _backward(fields.psi1, dx)
    psi1 = fields.psi1 - c * dt * _forward(psi2, dx)
    return replace(fields, psi1=psi1, psi2=psi2, t=fields.t + dt, psi1_t=fields.psi1_t + dt)


def discrete_energy(fields: EMFieldPair, dt: float) -> float:
    """sum(psi2^n^2 + psi1^{n-1/2} psi1^{n+1/2}) dx, exactly invariant under leapfrog."""
    psi1_prev = fields.psi1 + fields.c * dt * _forward(fields.psi2, fields.dx)
    return float(np.sum(fields.psi2 ** 2 + psi1_prev * fields.psi1) * fields.dx)


@dataclass
class MaxwellRun:
    history: list
    dt: float
    energies: np.ndarray
    naive_energies: np.ndarray

    @property
    def energy_drift(self) -> float:
        e0 = self.energies[0]
        return float(np.max(np.abs(self.energies - e0)) / abs(e0)) if e0 != 0 else float(np.max(np.abs(self.energies)))

    @property
    def naive_energy_drift(self) -> float:
        e0 = self.naive_energies[0]
        return float(np.max(np.abs(self.naive_energies - e0)) / abs(e0)) if e0 != 0 else 0.0

    @property
    def final(self) -> EMFieldPair:
        return self.history[-1]

    def energy_log(self) -> dict:
        return {
            "dt": self.dt,
            "steps": int(len(self.energies) - 1),
            "discrete_energy_initial": float(self.energies[0]),
            "discrete_energy_final": float(self.energies[-1]),
            "discrete_energy_relative_drift": self.energy_drift,
            "naive_energy_relative_drift": self.naive_energy_drift,
        }

    def to_json(self, path):
        return write_json(path, self.energy_log())


def run(fields: EMFieldPair, dt: float, n_steps: int, store_every: int | None = None) -> MaxwellRun:
    """Leapfrog ``n_steps``; energies every step, snapshots every ``store_every``."""
    if abs(fields.psi1_t - fields.t) <= 1e-15 * max(1.0, abs(fields.t)):
        fields = prime(fields, dt)
    history = [fields]
    energies = [discrete_energy(fields, dt)]
    naive = [fields.naive_energy()]
    for i in range(1, n_steps + 1):
        fields = evolve_step(fields, dt)
        energies.append(discrete_energy(fields, dt))
        naive.append(fields.naive_energy())
        if store_every and i % store_every == 0:
            history.append(fields)
    if history[-1] is not fields:
        history.append(fields)
    return MaxwellRun(history, dt, np.array(energies), np.array(naive))


def shape_error(fields: EMFieldPair, f1, f2) -> float:
    """Relative L2 error of both components against exact f(x, t)."""
    e1 = fields.psi1 - f1(fields.x_half, fields.psi1_t)
    e2 = fields.psi2 - f2(fields.x, fields.t)
    ref = np.sqrt(np.sum(f1(fields.x_half, fields.psi1_t) ** 2) + np.sum(f2(fields.x, fields.t) ** 2))
    return float(np.sqrt(np.sum(e1 ** 2) + np.sum(e2 ** 2)) / ref)


@dataclass
class WaveEquationReport:
    max_residual_psi1: float
    max_residual_psi2: float

    @property
    def max_residual(self) -> float:
        return max(self.max_residual_psi1, self.max_residual_psi2)

    def to_dict(self) -> dict:
        return {"max_residual_psi1": self.max_residual_psi1, "max_residual_psi2": self.max_residual_psi2}


def wave_equation_check(history) -> WaveEquationReport:
    """max |d2/dt2 - c^2 d2/dx2| per component, from uniformly spaced slices.

    Second differences in time use consecutive slices; interior slices only.
    """
    if len(history) < 3:
        raise ValueError("need at least 3 time slices")
    times = np.array([h.t for h in history])
    dts = np.diff(times)
    if not np.allclose(dts, dts[0], rtol=1e-9, atol=0.0):
        raise ValueError("time slices must be uniformly spaced")
    dt = dts[0]
    c, dx = history[0].c, history[0].dx
    out = []
    for comp in ("psi1", "psi2"):
        a = np.array([getattr(h, comp) for h in history])
        dtt = (a[2:] - 2 * a[1:-1] + a[:-2]) / dt ** 2
        mid = a[1:-1]
        dxx = (np.roll(mid, -1, axis=1) - 2 * mid + np.roll(mid, 1, axis=1)) / dx ** 2
        out.append(float(np.max(np.abs(dtt - c ** 2 * dxx))))
    return WaveEquationReport(*out)


def snapshot_csv(path, fields: EMFieldPair):
    """Columns x, psi1, psi2 (psi1 at its half-node positions when staggered)."""
    return write_csv(path, {"x": fields.x, "x_psi1": fields.x_half, "psi1": fields.psi1, "psi2": fields.psi2})
