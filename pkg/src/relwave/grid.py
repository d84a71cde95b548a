"""Uniform periodic grids and centered finite-difference stencils."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


@dataclass
class GridField:
    """Complex samples on x0 + i*dx; ``values`` is (N,) or (2, N)."""

    x0: float
    dx: float
    values: np.ndarray
    t: float = 0.0
    boundary: str = "periodic"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if not self.dx > 0:
            raise ValueError("dx must be positive")
        if self.values.ndim not in (1, 2):
            raise ValueError("values must be (N,) or (ncomp, N)")
        if self.boundary != "periodic":
            raise ValueError("only periodic boundaries are supported")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite samples")

    @property
    def n(self) -> int:
        return self.values.shape[-1]

    @property
    def components(self) -> int:
        return 1 if self.values.ndim == 1 else self.values.shape[0]

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def density(self) -> np.ndarray:
        v = np.abs(self.values) ** 2
        return v if v.ndim == 1 else v.sum(axis=0)

    @property
    def norm(self) -> float:
        return float(np.sum(self.density) * self.dx)

    def with_values(self, values, t: float | None = None) -> "GridField":
        return replace(self, values=values, t=self.t if t is None else t)


def d1(f, dx: float, stride: int = 1):
    """Periodic centered first derivative, second order."""
    return (np.roll(f, -stride, axis=-1) - np.roll(f, stride, axis=-1)) / (2 * stride * dx)


def d2(f, dx: float, stride: int = 1):
    """Periodic centered second derivative, second order."""
    h = stride * dx
    return (np.roll(f, -stride, axis=-1) - 2 * f + np.roll(f, stride, axis=-1)) / h ** 2
