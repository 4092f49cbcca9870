"""Physical constants used at the unit boundary (SI)."""

from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class PhysicalConstants:
    """Background light speed (m/s) and reduced Planck constant (J*s)."""

    c0: float = 2.99792458e8
    hbar: float = 1.054571817e-34

    def __post_init__(self):
        if not (self.c0 > 0.0) or not (self.hbar > 0.0):
            raise ValidationError("c0 and hbar must be strictly positive")


DEFAULT_CONSTANTS = PhysicalConstants()

#: Background light speed used wherever no explicit constants are passed.
C0 = DEFAULT_CONSTANTS.c0
