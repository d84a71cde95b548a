"""Relativistic kinematics per unit rest mass, and the convention registry.

All energies and momenta are divided by the rest mass, so ``E`` carries
units of velocity squared and ``p`` units of velocity.  ``hbar_m`` is the
correspondingly scaled Planck constant (action per mass).

The imaginary time coordinates t' = jct and tau' = jc*tau used in the
geodesic formulation are resolved once, analytically, and every evaluator
works in real time.  The two remaining sign ambiguities are the temporal
phase exp(-j*eps*E*t/hbar_m) and the spatial phase exp(+j*s*p*x/hbar_m);
both are carried on :class:`Conventions`.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from .errors import VelocityOutOfRange

#: Default fractional guard: |v| must stay below c * (1 - VELOCITY_GUARD).
VELOCITY_GUARD = 1e-9


@dataclass(frozen=True)
class Conventions:
    c: float = 1.0
    hbar_m: float = 1.0
    energy_sign: int = 1
    spatial_sign: int = 1
    velocity_guard: float = VELOCITY_GUARD

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if not self.hbar_m > 0:
            raise ValueError(f"hbar_m must be positive, got {self.hbar_m}")
        if self.energy_sign not in (1, -1):
            raise ValueError(f"energy_sign must be +1 or -1, got {self.energy_sign}")
        if self.spatial_sign not in (1, -1):
            raise ValueError(f"spatial_sign must be +1 or -1, got {self.spatial_sign}")
        if not 0 <= self.velocity_guard < 1:
            raise ValueError(f"velocity_guard must lie in [0, 1), got {self.velocity_guard}")

    @property
    def v_max(self) -> float:
        return self.c * (1.0 - self.velocity_guard)

    def with_signs(self, energy_sign: int | None = None, spatial_sign: int | None = None) -> "Conventions":
        return replace(
            self,
            energy_sign=self.energy_sign if energy_sign is None else energy_sign,
            spatial_sign=self.spatial_sign if spatial_sign is None else spatial_sign,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Conventions":
        return cls(**data)


@dataclass(frozen=True)
class Kinematics:
    v: float
    w: float
    E: float
    p: float
    c: float = 1.0

    @property
    def dispersion_defect(self) -> float:
        """(E/c)^2 - p^2 - c^2, zero on shell."""
        return (self.E / self.c) ** 2 - self.p ** 2 - self.c ** 2


def check_velocity(v, c: float = 1.0, guard: float = VELOCITY_GUARD) -> None:
    """Raise VelocityOutOfRange if any |v| reaches c*(1 - guard)."""
    limit = c * (1.0 - guard)
    vmax = float(np.max(np.abs(v)))
    if not vmax < limit:
        raise VelocityOutOfRange(
            f"|v| must stay below {limit!r} (c={c!r}, guard={guard!r}), got |v|={vmax!r}"
        )


def lorentz_factor(v, c: float = 1.0, guard: float = VELOCITY_GUARD):
    """Return w = sqrt(1 - v^2/c^2), the reciprocal of the usual gamma.

    Accepts scalars or arrays; scalars come back as float.
    """
    check_velocity(v, c, guard)
    w = np.sqrt(1.0 - (np.asarray(v, dtype=float) / c) ** 2)
    return float(w) if w.ndim == 0 else w


def energy_momentum(v: float, conv: Conventions = Conventions()) -> Kinematics:
    w = lorentz_factor(v, conv.c, conv.velocity_guard)
    return Kinematics(v=v, w=w, E=conv.c ** 2 / w, p=v / w, c=conv.c)


def expansion_coefficient(k: int) -> float:
    """k-th Taylor coefficient of (1 - x)^(-1/2): (2k)! / (4^k (k!)^2)."""
    return math.comb(2 * k, k) / 4 ** k


def energy_expansion(v: float, c: float = 1.0, order: int = 1, guard: float = VELOCITY_GUARD) -> float:
    """Truncated series c^2 * sum_{k<=order} a_k (v/c)^(2k) for E = c^2/w.

    ``order=1`` gives the familiar c^2 + v^2/2.  Every coefficient is
    positive, so the partial sums increase monotonically towards c^2/w.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    check_velocity(v, c, guard)
    x = (v / c) ** 2
    total = 0.0
    term = 1.0
    for k in range(order + 1):
        total += expansion_coefficient(k) * term
        term *= x
    return c ** 2 * total
