"""Grid evolution of the one-component wave equation and the two-component system.

Schrodinger-type equation (periodic, free):

    j hbar dPsi/dt = -K hbar^2 d2Psi/dx2 + r c^2 Psi,

K = 1 for ``unit_kinetic`` and K = 1/2 for ``textbook_half``; r = 0 in the
rotating frame.  Two-component system, written in real time:

    dPsi1/dt =  j c dPsi2/dx + (j c^2/hbar) Psi1,
    dPsi2/dt = -j c dPsi1/dx - (j c^2/hbar) Psi2,

whose plane waves obey E^2 = c^2 p^2 + c^4.  Both generators are
anti-Hermitian after central differencing, so the Crank-Nicolson (Cayley)
steps below are unitary up to round-off.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import CourantViolation, LinearSolveFailure, ResolutionError
from .grid import GridField
from .io import write_csv, write_json
from .kinematics import Conventions, check_velocity, lorentz_factor

VARIANTS = {"unit_kinetic": 1.0, "textbook_half": 0.5}


@dataclass(frozen=True)
class PacketSpec:
    x_center: float
    width: float
    v_center: float = 0.0
    conv: Conventions = field(default_factory=Conventions)
    paired: bool = False

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("width must be positive")
        check_velocity(self.v_center, self.conv.c, self.conv.velocity_guard)

    @property
    def p_center(self) -> float:
        return self.v_center / lorentz_factor(self.v_center, self.conv.c, self.conv.velocity_guard)

    @property
    def k_center(self) -> float:
        """Carrier wavenumber s p / hbar."""
        return self.conv.spatial_sign * self.p_center / self.conv.hbar_m


def wavenumbers(n: int, dx: float) -> np.ndarray:
    return 2 * np.pi * np.fft.fftfreq(n, dx)


def build_packet(spec: PacketSpec, n: int, dx: float, x0: float = 0.0, alias_tol: float = 1e-8) -> GridField:
    """Gaussian superposition of grid plane waves, normalized to sum |Psi|^2 dx = 1.

    ``width`` is the standard deviation of |Psi|^2 in position.  The
    amplitude of mode k is exp(-(k - k0)^2 width^2) exp(-j k (x_c - x0));
    with ``paired`` the mirror term at -k0 is added with equal weight,
    which makes the envelope real.
    """
    if spec.width < 4 * dx:
        raise ResolutionError(f"width {spec.width!r} < 4 dx = {4 * dx!r}")
    L = n * dx
    if np.exp(-((L / 2) ** 2) / (4 * spec.width ** 2)) > alias_tol:
        raise ResolutionError(f"domain length {L!r} too short for width {spec.width!r}")
    k = wavenumbers(n, dx)
    k0 = spec.k_center
    k_nyq = np.pi / dx
    if abs(k0) >= k_nyq or np.exp(-((k_nyq - abs(k0)) ** 2) * spec.width ** 2) > alias_tol:
        raise ResolutionError(f"momentum content at |k|={abs(k0):.4g} reaches the grid cutoff {k_nyq:.4g}")
    shift = np.exp(-1j * k * (spec.x_center - x0))
    amp = np.exp(-((k - k0) ** 2) * spec.width ** 2)
    if spec.paired:
        amp = amp + np.exp(-((k + k0) ** 2) * spec.width ** 2)
    psi = np.fft.ifft(amp * shift)
    psi = psi / np.sqrt(np.sum(np.abs(psi) ** 2) * dx)
    return GridField(x0=x0, dx=dx, values=psi)


def momentum_centroid(field: GridField, conv: Conventions = Conventions()) -> float:
    """<p> = s hbar <k> from the discrete Fourier power spectrum."""
    k = wavenumbers(field.n, field.dx)
    power = np.abs(np.fft.fft(field.values, axis=-1)) ** 2
    if power.ndim == 2:
        power = power.sum(axis=0)
    return float(conv.spatial_sign * conv.hbar_m * np.sum(k * power) / np.sum(power))


# --- operators ---------------------------------------------------------------


def _periodic_laplacian(n: int, dx: float) -> sp.csc_matrix:
    main = -2.0 * np.ones(n)
    off = np.ones(n - 1)
    L = sp.diags([off, main, off], [-1, 0, 1], shape=(n, n), format="lil")
    L[0, n - 1] = 1.0
    L[n - 1, 0] = 1.0
    return (L / dx ** 2).tocsc()


def _periodic_gradient(n: int, dx: float) -> sp.csc_matrix:
    off = np.ones(n - 1)
    D = sp.diags([-off, off], [-1, 1], shape=(n, n), format="lil")
    D[0, n - 1] = -1.0
    D[n - 1, 0] = 1.0
    return (D / (2 * dx)).tocsc()


def schrodinger_generator(n: int, dx: float, hbar: float, c: float, kinetic: float, rest: bool) -> sp.csc_matrix:
    """A with dPsi/dt = A Psi."""
    A = 1j * kinetic * hbar * _periodic_laplacian(n, dx)
    if rest:
        A = A - (1j * c ** 2 / hbar) * sp.identity(n, format="csc")
    return A.tocsc()


def dirac_generator(n: int, dx: float, hbar: float, c: float) -> sp.csc_matrix:
    D = _periodic_gradient(n, dx)
    Id = sp.identity(n, format="csc")
    m = 1j * c ** 2 / hbar
    return sp.bmat([[m * Id, 1j * c * D], [-1j * c * D, -m * Id]], format="csc")


class _Cayley:
    """(I - dt/2 A)^-1 (I + dt/2 A) with a cached LU factorization."""

    def __init__(self, A: sp.csc_matrix, dt: float):
        Id = sp.identity(A.shape[0], format="csc")
        self.rhs = (Id + 0.5 * dt * A).tocsr()
        try:
            self.lu = splu((Id - 0.5 * dt * A).tocsc())
        except RuntimeError as exc:
            raise LinearSolveFailure(f"implicit system singular: {exc}") from None

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        out = self.lu.solve(self.rhs @ psi)
        if not np.all(np.isfinite(out)):
            raise LinearSolveFailure("implicit solve produced non-finite values")
        return out


@lru_cache(maxsize=32)
def _schrodinger_stepper(n, dx, dt, hbar, c, kinetic, rest):
    return _Cayley(schrodinger_generator(n, dx, hbar, c, kinetic, rest), dt)


@lru_cache(maxsize=32)
def _dirac_stepper(n, dx, dt, hbar, c):
    return _Cayley(dirac_generator(n, dx, hbar, c), dt)


def step_schrodinger(
    field: GridField,
    dt: float,
    conv: Conventions = Conventions(),
    variant: str = "unit_kinetic",
    rotating_frame: bool = False,
) -> GridField:
    """One Crank-Nicolson step.

    ``rotating_frame`` drops the rest-energy term, i.e. evolves
    Psi exp(j c^2 t / hbar); densities are unchanged.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {sorted(VARIANTS)}, got {variant!r}")
    if field.components != 1:
        raise ValueError("step_schrodinger needs a single-component field")
    stepper = _schrodinger_stepper(field.n, float(field.dx), float(dt), conv.hbar_m, conv.c, VARIANTS[variant], not rotating_frame)
    return field.with_values(stepper(field.values), t=field.t + dt)


def step_dirac(field: GridField, dt: float, conv: Conventions = Conventions()) -> GridField:
    """One Crank-Nicolson step of the two-component system."""
    if field.components != 2:
        raise ValueError("step_dirac needs a (2, N) field")
    nu = conv.c * dt / field.dx
    if nu > 1.0:
        raise CourantViolation(f"c*dt/dx = {nu:.6g} > 1")
    stepper = _dirac_stepper(field.n, float(field.dx), float(dt), conv.hbar_m, conv.c)
    out = stepper(field.values.reshape(-1)).reshape(2, field.n)
    return field.with_values(out, t=field.t + dt)


def dirac_plane_wave(n: int, dx: float, mode: int, branch: int = 1, conv: Conventions = Conventions(), x0: float = 0.0):
    """Grid plane wave with wavenumber 2 pi mode / L and spinor from the null space.

    Returns (field, E) with E = branch * sqrt(c^2 p^2 + c^4), p = hbar k.
    The speed implied by p is v = p c / sqrt(p^2 + c^2).
    """
    from .dirac import dirac_matrix, null_space
    from .kinematics import energy_momentum

    k = 2 * np.pi * mode / (n * dx)
    p = conv.hbar_m * k
    c = conv.c
    v = p * c / np.sqrt(p ** 2 + c ** 2)
    kin = energy_momentum(abs(v), conv)
    beta_s = 1 if k >= 0 else -1
    u = null_space(dirac_matrix(kin, beta_s, branch, conv.with_signs(energy_sign=1)))
    x = x0 + dx * np.arange(n)
    carrier = np.exp(1j * k * (x - x0))
    field = GridField(x0=x0, dx=dx, values=np.array([u.u1 * carrier, u.u2 * carrier]))
    return field, branch * kin.E


# --- runs and diagnostics ----------------------------------------------------


@dataclass
class EvolutionRun:
    fields: list
    scheme: str
    dt: float
    conv: Conventions

    @property
    def final(self) -> GridField:
        return self.fields[-1]

    def metadata(self) -> dict:
        h = density_history(self)
        tot = h["total"]
        return {
            "scheme": self.scheme,
            "dt": self.dt,
            "dx": self.fields[0].dx,
            "n": self.fields[0].n,
            "stored_slices": len(self.fields),
            "t_final": self.final.t,
            "norm_initial": float(tot[0]),
            "norm_relative_drift": float(np.max(np.abs(tot - tot[0])) / tot[0]),
            "conventions": self.conv.to_dict(),
        }

    def to_json(self, path):
        return write_json(path, self.metadata())


def run_schrodinger(field: GridField, dt: float, n_steps: int, conv: Conventions = Conventions(), variant: str = "unit_kinetic", store_every: int = 1, rotating_frame: bool = False) -> EvolutionRun:
    out = [field]
    for i in range(1, n_steps + 1):
        field = step_schrodinger(field, dt, conv, variant, rotating_frame)
        if i % store_every == 0 or i == n_steps:
            out.append(field)
    return EvolutionRun(out, f"crank_nicolson/{variant}" + ("/rotating" if rotating_frame else ""), dt, conv)


def run_dirac(field: GridField, dt: float, n_steps: int, conv: Conventions = Conventions(), store_every: int = 1) -> EvolutionRun:
    out = [field]
    for i in range(1, n_steps + 1):
        field = step_dirac(field, dt, conv)
        if i % store_every == 0 or i == n_steps:
            out.append(field)
    return EvolutionRun(out, "crank_nicolson/two_component", dt, conv)


def density_history(run: EvolutionRun) -> dict:
    """Columns t, total, centroid, variance (non-periodic moments of the density)."""
    if not run.fields:
        raise ValueError("empty run")
    t, total, centroid, variance = [], [], [], []
    for f in run.fields:
        rho = f.density
        x = f.x
        m0 = np.sum(rho) * f.dx
        mu = np.sum(x * rho) * f.dx / m0
        t.append(f.t)
        total.append(m0)
        centroid.append(mu)
        variance.append(np.sum((x - mu) ** 2 * rho) * f.dx / m0)
    return {k: np.array(v) for k, v in (("t", t), ("total", total), ("centroid", centroid), ("variance", variance))}


def fit_velocity(history: dict):
    """Least-squares centroid velocity and the R^2 of the linear fit."""
    t, xc = history["t"], history["centroid"]
    slope, icpt = np.polyfit(t, xc, 1)
    resid = xc - (slope * t + icpt)
    ss = np.sum((xc - xc.mean()) ** 2)
    r2 = 1.0 - np.sum(resid ** 2) / ss if ss > 0 else 1.0
    return float(slope), float(r2)


def group_velocity(p: float, variant: str = "unit_kinetic", conv: Conventions = Conventions()) -> float:
    """dE/dp of E = K p^2 + c^2 along the propagation direction s."""
    return conv.spatial_sign * 2.0 * VARIANTS[variant] * p


def continuum_frequency(k, conv: Conventions = Conventions(), variant: str = "unit_kinetic", rest: bool = True):
    return VARIANTS[variant] * conv.hbar_m * np.asarray(k) ** 2 + (conv.c ** 2 / conv.hbar_m if rest else 0.0)


def discrete_frequency(k, dx: float, dt: float, conv: Conventions = Conventions(), variant: str = "unit_kinetic", rest: bool = True):
    """Angular frequency of a grid Fourier mode under the CN scheme.

    The semi-discrete rate is K hbar (2 - 2 cos k dx)/dx^2 (+ c^2/hbar);
    Crank-Nicolson maps a rate w to a per-step phase 2 arctan(w dt/2).
    """
    k = np.asarray(k)
    w = VARIANTS[variant] * conv.hbar_m * (2 - 2 * np.cos(k * dx)) / dx ** 2 + (conv.c ** 2 / conv.hbar_m if rest else 0.0)
    return 2.0 * np.arctan(0.5 * w * dt) / dt


def snapshot_csv(path, field: GridField):
    x = field.x
    if field.components == 1:
        v = field.values
        cols = {"x": x, "re_psi": v.real, "im_psi": v.imag, "abs2": np.abs(v) ** 2}
    else:
        a, b = field.values
        cols = {
            "x": x,
            "re_psi1": a.real,
            "im_psi1": a.imag,
            "re_psi2": b.real,
            "im_psi2": b.imag,
            "density": np.abs(a) ** 2 + np.abs(b) ** 2,
        }
    return write_csv(path, cols)


def history_csv(path, history: dict):
    return write_csv(path, history)
