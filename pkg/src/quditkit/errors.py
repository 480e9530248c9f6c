"""Exception types raised across the package."""


class QuditKitError(Exception):
    """Base class for all package errors."""


class InvalidQuantumNumbers(QuditKitError, ValueError):
    """Angular-momentum labels violate triangle or projection rules."""


class InvalidIndex(QuditKitError, ValueError):
    """A tensor, kitten or basis index is out of range."""


class NonUnitAxis(QuditKitError, ValueError):
    """A rotation axis is not normalized."""


class ShapeMismatch(QuditKitError, ValueError):
    """Operands have incompatible dimensions."""


class StepTooLarge(QuditKitError, RuntimeError):
    """The fixed-step integrator drifted in trace beyond tolerance."""


class Diverged(QuditKitError, RuntimeError):
    """An optimization objective became non-finite."""


class AmbiguousBranch(QuditKitError, RuntimeError):
    """Two dressed eigenvectors overlap the bare state equally."""


class DegenerateLevel(QuditKitError, RuntimeError):
    """Perturbation theory was requested for a degenerate coupled level."""


class UnsupportedConfiguration(QuditKitError, ValueError):
    """The construction is undefined for the requested parameters."""


class ConfigError(QuditKitError, ValueError):
    """A run configuration failed validation; ``field`` names the offender."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class InvalidState(QuditKitError, ValueError):
    """A density matrix is not Hermitian, unit-trace and positive semidefinite."""
