"""Plane-wave pseudo-particles and residuals of the modified Schrodinger equation.

The equation under test is

    j hbar dPsi/dt + K hbar^2 d2Psi/dx2 - r c^2 Psi = 0

with K = 1 and r = 1 in the relativistic form.  ``kinetic`` (K) and
``rest_energy`` (r in {0, 1}) let the textbook free equation be
recovered for comparison (K = 1/2, r = 0).

On Psi = amp * exp[j(s p x - eps E t)/hbar] the operator acts as
multiplication by R = eps*E - K p^2 - r c^2.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .io import write_csv, write_json
from .kinematics import Conventions, lorentz_factor


@dataclass(frozen=True)
class PlaneWave:
    E: float
    p: float
    amp: complex = 1.0
    conv: Conventions = field(default_factory=Conventions)

    def phase(self, x, t):
        c = self.conv
        return (c.spatial_sign * self.p * np.asarray(x) - c.energy_sign * self.E * np.asarray(t)) / c.hbar_m


def evaluate(wave: PlaneWave, x, t):
    """amp * exp[j (s p x - eps E t) / hbar]."""
    return wave.amp * np.exp(1j * wave.phase(x, t))


def schrodinger_residual(wave: PlaneWave, kinetic: float = 1.0, rest_energy: bool = True) -> float:
    """Eigenvalue R of the wave operator on ``wave`` (closed form)."""
    c = wave.conv
    return c.energy_sign * wave.E - kinetic * wave.p ** 2 - (c.c ** 2 if rest_energy else 0.0)


def apply_operator_fd(wave: PlaneWave, x: float, t: float, h: float, kinetic: float = 1.0, rest_energy: bool = True) -> complex:
    """Operator applied at (x, t) by central differences, divided by Psi.

    Independent route to :func:`schrodinger_residual`; error is O(h^2).
    """
    c = wave.conv
    psi = evaluate(wave, x, t)
    dpsi_dt = (evaluate(wave, x, t + h) - evaluate(wave, x, t - h)) / (2 * h)
    d2psi_dx2 = (evaluate(wave, x + h, t) - 2 * psi + evaluate(wave, x - h, t)) / h ** 2
    out = 1j * c.hbar_m * dpsi_dt + kinetic * c.hbar_m ** 2 * d2psi_dx2
    if rest_energy:
        out -= c.c ** 2 * psi
    return complex(out / psi)


@dataclass
class DispersionTable:
    v: np.ndarray
    w: np.ndarray
    energy_sign: np.ndarray
    E_kinematic: np.ndarray
    p: np.ndarray
    residual_kinematic_pair: np.ndarray
    residual_closed_form: np.ndarray
    residual_dispersion_pair: np.ndarray

    def rows(self, energy_sign: int | None = None):
        mask = np.ones_like(self.v, dtype=bool) if energy_sign is None else self.energy_sign == energy_sign
        return {k: getattr(self, k)[mask] for k in self.__dataclass_fields__}

    def to_csv(self, path):
        return write_csv(path, {k: getattr(self, k) for k in self.__dataclass_fields__})

    def summary(self) -> dict:
        out = {}
        for eps in (1, -1):
            r = self.rows(eps)
            out[f"eps={eps:+d}"] = {
                "max_abs_dispersion_pair_residual": float(np.max(np.abs(r["residual_dispersion_pair"]))),
                "max_closed_form_mismatch": float(np.max(np.abs(r["residual_kinematic_pair"] - r["residual_closed_form"]))),
                "max_abs_kinematic_pair_residual": float(np.max(np.abs(r["residual_kinematic_pair"]))),
            }
        return out

    def to_json(self, path):
        return write_json(path, self.summary())


def kinematic_pair_closed_form(w, c: float = 1.0, energy_sign: int = 1):
    """R for (E = c^2/w, p = v/w): eps*c^2/w - c^2/w^2."""
    return energy_sign * c ** 2 / w - c ** 2 / w ** 2


def dispersion_scan(conv: Conventions, v_samples) -> DispersionTable:
    """Residuals of the kinematic pair and of the on-dispersion pair, for eps = +-1."""
    v = np.asarray(v_samples, dtype=float)
    w = lorentz_factor(v, conv.c, conv.velocity_guard)
    w = np.atleast_1d(w)
    cols = {k: [] for k in DispersionTable.__dataclass_fields__}
    for eps in (1, -1):
        local = conv.with_signs(energy_sign=eps)
        for vi, wi in zip(v, w):
            E, p = conv.c ** 2 / wi, vi / wi
            on_shell = PlaneWave(E=eps * (p ** 2 + conv.c ** 2), p=p, conv=local)
            cols["v"].append(vi)
            cols["w"].append(wi)
            cols["energy_sign"].append(eps)
            cols["E_kinematic"].append(E)
            cols["p"].append(p)
            cols["residual_kinematic_pair"].append(schrodinger_residual(PlaneWave(E=E, p=p, conv=local)))
            cols["residual_closed_form"].append(kinematic_pair_closed_form(wi, conv.c, eps))
            cols["residual_dispersion_pair"].append(schrodinger_residual(on_shell))
    return DispersionTable(**{k: np.array(vals) for k, vals in cols.items()})


def loglog_slope(x, y) -> float:
    """Least-squares slope of log|y| against log|x|."""
    return float(np.polyfit(np.log(np.abs(x)), np.log(np.abs(y)), 1)[0])


@dataclass
class BornDensity:
    values: np.ndarray
    total: float
    cross_term: np.ndarray | None = None


def born_density(field, dx: float) -> BornDensity:
    """|Psi|^2 for one component, |Psi1|^2 + |Psi2|^2 for a (2, N) field.

    For two components the interference term 2 Re(Psi1 Psi2*) is returned
    separately; the coherent |Psi1 + Psi2|^2 equals ``values`` only where it
    vanishes.
    """
    arr = np.asarray(field)
    if not np.all(np.isfinite(arr)):
        raise ValueError("field contains non-finite samples")
    cross = None
    if arr.ndim == 2:
        values = np.sum(np.abs(arr) ** 2, axis=0)
        if arr.shape[0] == 2:
            cross = 2.0 * np.real(arr[0] * np.conj(arr[1]))
    else:
        values = np.abs(arr) ** 2
    return BornDensity(values=values, total=float(np.sum(values) * dx), cross_term=cross)
