"""Exception and warning types shared across the workbench."""


class RelwaveError(Exception):
    """Base class for all workbench errors."""


class VelocityOutOfRange(RelwaveError, ValueError):
    """Velocity at or beyond the light-speed guard (w -> 0 singularity)."""


class NonTimelike(VelocityOutOfRange):
    """A world line sample violates the velocity guard."""


class NegativeEnergy(RelwaveError, ValueError):
    """Potential energy exceeds the local relativistic energy c^2/w."""


class MetricDomainError(RelwaveError, ValueError):
    """Position outside the metric profile's domain, or g <= 0 there."""


class NotSingular(RelwaveError, ValueError):
    """A null vector was requested for a matrix with non-negligible determinant."""


class GridTooCoarse(RelwaveError, ValueError):
    """Finite-difference error estimate swamps the quantity being measured."""


class RelaxationFailure(RelwaveError, RuntimeError):
    """The discrete Euler-Lagrange solve did not converge."""


class CourantViolation(RelwaveError, ValueError):
    """c*dt/dx exceeds 1."""


class LinearSolveFailure(RelwaveError, RuntimeError):
    """Implicit step system could not be factorized or solved."""


class ResolutionError(RelwaveError, ValueError):
    """Packet not resolved by the grid (too narrow or aliased)."""


class ConfigError(RelwaveError, ValueError):
    """Scenario validation failure; carries every problem found."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class InvariantDriftWarning(UserWarning):
    """A conserved quantity drifted beyond its monitoring tolerance."""
