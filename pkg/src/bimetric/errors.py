"""Exception types shared across the package."""


class BimetricError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(BimetricError, ValueError):
    """A value violates a documented invariant (shape, norm, range, ...)."""


class DimensionMismatchError(ValidationError):
    """Operands have incompatible dimensions."""


class NonHermitianError(ValidationError):
    """An operator that must be Hermitian is not."""


class EigenvalueError(BimetricError):
    """A spectrum contains an eigenvalue too negative to be numerical noise."""


class DegenerateMetricError(BimetricError):
    """The rank-one correction makes the metric singular."""


class ConstraintViolationError(BimetricError):
    """The spatial-gradient bound beta*(grad phi)^2 < 1 is violated."""

    def __init__(self, value: float, message: str | None = None):
        self.value = float(value)
        if message is None:
            message = f"beta*(grad phi)^2 = {value!r} >= 1 leaves the light cone undefined"
        super().__init__(message)


class SuperluminalVelocityError(ValidationError):
    """A boost velocity at or above the speed of light was requested."""


class FieldInstabilityError(BimetricError):
    """The lattice evolution blew up."""


class NoArrivalError(BimetricError):
    """A traced signal failed to reach its target within the time budget."""


class CalibrationError(BimetricError):
    """The requested superluminal factor cannot be realized."""

    def __init__(self, message: str, max_achievable: float | None = None):
        self.max_achievable = max_achievable
        super().__init__(message)


class ConfigError(BimetricError):
    """A configuration file or override is unusable (CLI exit code 3)."""
