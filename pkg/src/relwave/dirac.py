"""Dirac-style factorization in 1+1D, the two-component plane-wave system,
its Schrodinger-limit reduction, and the spin-phase jitter estimate.

Naming: ``beta_m`` is the mass matrix of the factorization and ``beta_s``
the +-1 spatial sign of the plane waves.  ``branch`` selects E = +-c^2/w.

Substituting Psi_i = u_i exp[j(beta_s p x - E t)/hbar] into the operator
rows gives the amplitude system

    [[beta_s p,      j(E/c - c)],
     [j(E/c + c),   -beta_s p  ]] (u1, u2) = 0,

singular exactly when E^2/c^2 = p^2 + c^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    ComplexMatrix2,
    IdentityResult,
    MatrixPolynomial,
    anticommutator,
    check_identity,
    pauli,
    scalar_square_sum,
)
from .errors import GridTooCoarse, NotSingular
from .grid import GridField, d1, d2
from .kinematics import Conventions, Kinematics, energy_momentum, lorentz_factor


@dataclass(frozen=True)
class DiracAssignment:
    alpha0: ComplexMatrix2
    alpha1: ComplexMatrix2
    beta_m: ComplexMatrix2 | None

    @classmethod
    def from_indices(cls, i0: int, i1: int, im: int | None) -> "DiracAssignment":
        return cls(pauli(i0), pauli(i1), None if im is None else pauli(im))


#: alpha = (sigma3, sigma1), beta = sigma2.
REFERENCE_ASSIGNMENT = DiracAssignment.from_indices(3, 1, 2)


@dataclass
class DecompositionReport:
    conditions: list = field(default_factory=list)
    expansion_holds: bool = False

    @property
    def passed(self) -> bool:
        return self.expansion_holds and all(c.holds for c in self.conditions)

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "conditions": [c.to_dict() for c in self.conditions],
            "expansion": "pass" if self.expansion_holds else "fail",
        }


def decomposition_check(assign: DiracAssignment) -> DecompositionReport:
    """Anticommutation and unit-square conditions, plus the full expansion.

    With ``beta_m=None`` this is the massless check: only the alphas are
    tested and the target is (p0^2 + px^2) I.
    """
    eye = ComplexMatrix2.identity()
    zero = ComplexMatrix2.zeros()
    named = [("alpha0", assign.alpha0), ("alpha1", assign.alpha1)]
    conds: list[IdentityResult] = [check_identity(f"{n}^2 = I", m @ m, eye) for n, m in named]
    conds.append(check_identity("alpha0 alpha1 + alpha1 alpha0 = 0", anticommutator(assign.alpha0, assign.alpha1), zero))
    massive = assign.beta_m is not None
    if massive:
        b = assign.beta_m
        conds.append(check_identity("beta^2 = I", b @ b, eye))
        for n, m in named:
            conds.append(check_identity(f"beta {n} + {n} beta = 0", anticommutator(b, m), zero))
    linear = MatrixPolynomial.linear([assign.alpha0, assign.alpha1], assign.beta_m)
    expansion = (linear * linear) == scalar_square_sum(2, constant=massive)
    return DecompositionReport(conds, expansion)


def null_decomposition_check(alpha0: ComplexMatrix2 | None = None, alpha1: ComplexMatrix2 | None = None) -> DecompositionReport:
    """Massless factorization (alpha . p)^2 = p0^2 + px^2, default alpha = (sigma3, sigma1)."""
    return decomposition_check(
        DiracAssignment(pauli(3) if alpha0 is None else alpha0, pauli(1) if alpha1 is None else alpha1, None)
    )


def dirac_matrix(kin: Kinematics, beta_s: int, branch: int, conv: Conventions = Conventions()) -> ComplexMatrix2:
    """Amplitude matrix for E = branch * kin.E (and the temporal sign convention)."""
    c = kin.c
    E = branch * conv.energy_sign * kin.E
    p = beta_s * kin.p
    return ComplexMatrix2(complex(p), 1j * (E / c - c), 1j * (E / c + c), complex(-p))


def determinant_condition(kin: Kinematics, beta_s: int) -> float:
    """E^2/c^2 - beta_s^2 p^2 - c^2; zero iff non-trivial spinors exist."""
    return kin.E ** 2 / kin.c ** 2 - beta_s ** 2 * kin.p ** 2 - kin.c ** 2


@dataclass(frozen=True)
class Spinor2:
    u1: complex
    u2: complex
    beta_s: int | None = None
    branch: int | None = None

    @property
    def ratio(self) -> complex:
        """u2/u1 (inf if u1 == 0)."""
        return self.u2 / self.u1 if self.u1 != 0 else complex(math.inf)


def null_space(matrix: ComplexMatrix2, beta_s: int | None = None, branch: int | None = None, tol: float = 1e-10) -> Spinor2:
    """Unit null vector of a singular 2x2 matrix.

    Built from the row with the larger norm (ties go to row 1).  The phase
    is fixed so the first non-negligible component is real and positive.
    """
    a, b, c, d = (complex(x) for x in matrix.entries)
    scale = max(1.0, abs(a), abs(b), abs(c), abs(d)) ** 2
    det = a * d - b * c
    if abs(det) > tol * scale:
        raise NotSingular(f"|det|={abs(det):.3e} exceeds {tol * scale:.3e}")
    r1 = abs(a) ** 2 + abs(b) ** 2
    r2 = abs(c) ** 2 + abs(d) ** 2
    if r1 == 0 and r2 == 0:
        u = np.array([1.0 + 0j, 0j])
    elif r1 >= r2:
        u = np.array([b, -a])
    else:
        u = np.array([d, -c])
    u = u / np.linalg.norm(u)
    lead = u[0] if abs(u[0]) > 1e-300 else u[1]
    u = u * (abs(lead) / lead)
    if abs(u[0]) < 1e-300:
        u[0] = 0j
    return Spinor2(complex(u[0]), complex(u[1]), beta_s, branch)


def spinor(v: float, beta_s: int, branch: int, conv: Conventions = Conventions(), tol: float = 1e-10) -> Spinor2:
    return null_space(dirac_matrix(energy_momentum(v, conv), beta_s, branch, conv), beta_s, branch, tol)


def cross_term_check(s: Spinor2) -> float:
    """2 Re(u1 u2*): the interference term that must vanish for |Psi1|^2 + |Psi2|^2."""
    return 2.0 * (s.u1 * s.u2.conjugate()).real


def reduced_ratio_magnitude(v: float, c: float = 1.0) -> float:
    """v / (c (1 + w)), the stated amplitude-ratio magnitude."""
    return abs(v) / (c * (1.0 + lorentz_factor(v, c)))


# --- Schrodinger limit -------------------------------------------------------


@dataclass
class LimitResidual:
    K: np.ndarray
    first_order: np.ndarray
    second_order: np.ndarray
    fd_error: float


def elimination_coefficients(conv: Conventions = Conventions()) -> dict:
    """Operator coefficients (d/dt, d2/dx2, 1) after eliminating K.

    From the first reduced equation K = kappa dPsi/dx with
    kappa = -hbar/(j c); substituting into the second one gives
    (hbar/(jc)) d/dt - (hbar/j) kappa d2/dx2 + jc.  The result is shown
    multiplied by c, then rescaled two ways for comparison with the
    target j*hbar d/dt + hbar^2 d2/dx2 - c^2.
    """
    h, c = conv.hbar_m, conv.c
    kappa = -h / (1j * c)
    raw = np.array([h / (1j * c), -(h / 1j) * kappa, 1j * c]) * c
    target = np.array([1j * h, h ** 2, -(c ** 2)], dtype=complex)
    time_matched = raw * (target[0] / raw[0])
    mass_matched = raw * (target[2] / raw[2])
    return {
        "eliminated": raw,
        "time_normalized": time_matched,
        "mass_normalized": mass_matched,
        "target": target,
        "ratio_time_normalized": time_matched / target,
        "ratio_mass_normalized": mass_matched / target,
        "proportional": bool(np.allclose(time_matched, target)),
    }


def schrodinger_limit_residual(
    psi1: GridField,
    conv: Conventions = Conventions(),
    dpsi_dt=None,
    slices=None,
) -> LimitResidual:
    """Residuals of the reduced pair and of the target equation on ``psi1``.

    The time derivative comes from ``dpsi_dt`` (array) or ``slices =
    (psi_before, psi_after, dt)`` centred on psi1.  Spatial derivatives are
    periodic centred differences; a Richardson estimate (h vs 2h) of their
    error is compared against the size of the reduced-pair residual.
    """
    psi = psi1.values
    if psi.ndim != 1:
        raise ValueError("psi1 must be a single-component field")
    if dpsi_dt is None:
        if slices is None:
            raise ValueError("need dpsi_dt or slices")
        before, after, dt = slices
        dpsi_dt = (np.asarray(after) - np.asarray(before)) / (2 * dt)
    dpsi_dt = np.asarray(dpsi_dt, dtype=complex)
    h, c, dx = conv.hbar_m, conv.c, psi1.dx

    K = -(h / (1j * c)) * d1(psi, dx)
    first_order = (h / (1j * c)) * dpsi_dt - (h / 1j) * d1(K, dx) + 1j * c * psi
    second_order = 1j * h * dpsi_dt + h ** 2 * d2(psi, dx) - c ** 2 * psi

    fd_err_33 = h ** 2 * np.max(np.abs(d2(psi, dx) - d2(psi, dx, 2))) / 3.0
    dK_err = (h / c) * np.max(np.abs(d1(d1(psi, dx), dx) - d1(d1(psi, dx, 2), dx, 2))) / 3.0
    fd_error = float(max(fd_err_33, h * dK_err))
    scale = float(np.max(np.abs(first_order)))
    if fd_error > 0 and fd_error > scale:
        raise GridTooCoarse(f"finite-difference error {fd_error:.3e} exceeds residual magnitude {scale:.3e}")
    return LimitResidual(K=K, first_order=first_order, second_order=second_order, fd_error=fd_error)


# --- jitter ------------------------------------------------------------------

#: Pinned constants for the electron denormalization (SI).
HBAR = 1.054572e-34
ELECTRON_MASS = 9.109384e-31
SPEED_OF_LIGHT = 2.997925e8


def jitter_sigma(v: float, conv: Conventions = Conventions()) -> float:
    """Spin phase offset |v| / (c (w + 1)), in [0, 1)."""
    w = lorentz_factor(v, conv.c, conv.velocity_guard)
    return abs(v) / (conv.c * (w + 1.0))


@dataclass(frozen=True)
class JitterResult:
    v: float
    sigma: float
    delay: float | None
    amplitude: float
    rest_limit: float
    hbar_per_mass: float
    c: float

    @property
    def displacement_from_delay(self) -> float | None:
        """v * delay; equals ``amplitude`` whenever v != 0."""
        return None if self.delay is None else abs(self.v) * self.delay


def jitter_amplitude(v: float, conv: Conventions = Conventions(), mass: float | None = None, hbar: float = HBAR) -> JitterResult:
    """Jitter displacement 2 hbar_m / (c (w + 1)).

    Per unit mass by default.  With ``mass`` the per-mass Planck constant
    becomes ``hbar / mass`` (SI), giving 2 hbar / (m c (w + 1)) and the rest
    limit hbar / (m c), the reduced Compton wavelength.
    """
    w = lorentz_factor(v, conv.c, conv.velocity_guard)
    hm = conv.hbar_m if mass is None else hbar / mass
    sigma = abs(v) / (conv.c * (w + 1.0))
    delay = 2.0 * hm / (abs(v) * conv.c * (w + 1.0)) if v != 0 else None
    return JitterResult(
        v=v,
        sigma=sigma,
        delay=delay,
        amplitude=2.0 * hm / (conv.c * (w + 1.0)),
        rest_limit=hm / conv.c,
        hbar_per_mass=hm,
        c=conv.c,
    )


def electron_jitter(v: float = 0.0) -> JitterResult:
    return jitter_amplitude(v, Conventions(c=SPEED_OF_LIGHT), mass=ELECTRON_MASS, hbar=HBAR)
