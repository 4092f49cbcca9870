"""Flat-background metric, its rank-one field correction, and Lorentz boosts.

Coordinates use x0 = c0 * t, so the background metric is exactly
diag(1, -1, -1, -1) and all four components carry metres.  Gradient
covectors carry 1/m, with the time component d0 = (d/dt)/c0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .errors import (
    ConstraintViolationError,
    DegenerateMetricError,
    SuperluminalVelocityError,
    ValidationError,
)

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])
MINKOWSKI.setflags(write=False)

_METRIC_SYMMETRY_TOL = 1e-14
_DEGENERACY_TOL = 1e-12
_ORTHOGONALITY_TOL = 1e-12


def _as_four(x, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape != (4,):
        raise ValidationError(f"{name} must have 4 components, got shape {np.shape(x)}")
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} has non-finite components: {v}")
    return v


@dataclass(frozen=True)
class BimetricParams:
    """Coupling constant (m^2) between field gradients and the metric."""

    beta: float = 1.0

    def __post_init__(self):
        if not (self.beta > 0.0):
            raise ValidationError(f"beta must be > 0, got {self.beta!r}")


def gradient_norm_sq(grad) -> float:
    """Flat-background contraction d.d = (d0)^2 - |spatial|^2 (1/m^2)."""
    g = _as_four(grad, "grad")
    return float(g[0] ** 2 - g[1] ** 2 - g[2] ** 2 - g[3] ** 2)


def build_qmm(grad, params: BimetricParams) -> np.ndarray:
    """Metric with the rank-one gradient term added to the flat background."""
    g = _as_four(grad, "grad")
    return MINKOWSKI + params.beta * np.outer(g, g)


def inverse_qmm(q, grad, params: BimetricParams) -> np.ndarray:
    """Closed-form (Sherman-Morrison) inverse of the corrected metric.

    Raises :class:`DegenerateMetricError` when 1 + beta * d.d vanishes, which
    is exactly where the determinant crosses zero.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (4, 4):
        raise ValidationError(f"metric must be 4 x 4, got {q.shape}")
    if float(np.max(np.abs(q - q.T))) > _METRIC_SYMMETRY_TOL:
        raise ValidationError("metric is not symmetric")
    g = _as_four(grad, "grad")
    denom = 1.0 + params.beta * gradient_norm_sq(g)
    if abs(denom) < _DEGENERACY_TOL:
        raise DegenerateMetricError(
            f"metric is degenerate: 1 + beta * grad.grad = {denom:.3e}"
        )
    g_up = MINKOWSKI @ g  # raise the index on the flat background
    return MINKOWSKI - (params.beta / denom) * np.outer(g_up, g_up)


def det_qmm(grad, params: BimetricParams) -> float:
    """Determinant of the corrected metric, evaluated numerically.

    Callers should treat |det| < 1e-12 as unphysical; the closed form is
    -(1 + beta * grad.grad).
    """
    return float(np.linalg.det(build_qmm(grad, params)))


def interval_srm(dx) -> float:
    """Flat-background squared interval (m^2)."""
    d = _as_four(dx, "dx")
    return float(d[0] ** 2 - d[1] ** 2 - d[2] ** 2 - d[3] ** 2)


def interval_qmm(dx, grad, params: BimetricParams) -> float:
    """Corrected squared interval: flat value plus beta * (grad . dx)^2."""
    d = _as_four(dx, "dx")
    g = _as_four(grad, "grad")
    return interval_srm(d) + params.beta * float(g @ d) ** 2


def light_speed_temporal(
    phi_dot: float,
    params: BimetricParams,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> float:
    """Light speed when the field varies in time only; phi_dot in 1/s."""
    c0 = constants.c0
    return c0 * math.sqrt(1.0 + params.beta * float(phi_dot) ** 2 / c0**2)


def light_speed_spatial(
    grad_spatial,
    params: BimetricParams,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> float:
    """Light speed over a static field profile; grad components in 1/m.

    Requires beta * |grad|^2 < 1; at or beyond that bound the light cone
    degenerates and :class:`ConstraintViolationError` is raised.
    """
    g = np.asarray(grad_spatial, dtype=float).reshape(-1)
    if g.shape != (3,):
        raise ValidationError(
            f"grad_spatial must have 3 components, got shape {np.shape(grad_spatial)}"
        )
    b = params.beta * float(g @ g)
    if b >= 1.0:
        raise ConstraintViolationError(b)
    return constants.c0 / math.sqrt(1.0 - b)


@dataclass(frozen=True)
class LorentzBoost:
    """Boost matrix together with the velocity (units of c0) behind it."""

    matrix: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        lam = np.array(self.matrix, dtype=float)
        v = np.array(self.velocity, dtype=float).reshape(-1)
        if lam.shape != (4, 4):
            raise ValidationError(f"boost matrix must be 4 x 4, got {lam.shape}")
        if v.shape != (3,):
            raise ValidationError("boost velocity must have 3 components")
        speed = float(np.sqrt(v @ v))
        if speed >= 1.0:
            raise SuperluminalVelocityError(f"|v| = {speed!r} must be < 1")
        residual = float(np.max(np.abs(lam.T @ MINKOWSKI @ lam - MINKOWSKI)))
        if residual > _ORTHOGONALITY_TOL:
            raise ValidationError(
                f"matrix does not satisfy the orthogonality condition "
                f"(residual {residual:.3e})"
            )
        lam.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "matrix", lam)
        object.__setattr__(self, "velocity", v)


def boost(velocity) -> LorentzBoost:
    """Standard boost for a 3-velocity given as a fraction of c0."""
    v = np.asarray(velocity, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise ValidationError("velocity must have 3 components")
    v2 = float(v @ v)
    if v2 >= 1.0:
        raise SuperluminalVelocityError(f"|v| = {math.sqrt(v2)!r} must be < 1")
    lam = np.eye(4)
    if v2 > 0.0:
        gamma_l = 1.0 / math.sqrt(1.0 - v2)
        lam[0, 0] = gamma_l
        lam[0, 1:] = -gamma_l * v
        lam[1:, 0] = -gamma_l * v
        lam[1:, 1:] = np.eye(3) + (gamma_l - 1.0) * np.outer(v, v) / v2
    return LorentzBoost(lam, v)


def transform(boost_: LorentzBoost, dx, grad) -> tuple[np.ndarray, np.ndarray]:
    """Push a displacement and a gradient covector into the boosted frame.

    The vector transforms with the boost matrix and the covector with its
    inverse transpose (eta @ Lambda @ eta for an orthogonal Lambda), so the
    contraction grad . dx and both intervals are frame independent.
    """
    d = _as_four(dx, "dx")
    g = _as_four(grad, "grad")
    lam = boost_.matrix
    inv_t = MINKOWSKI @ lam @ MINKOWSKI
    return lam @ d, inv_t @ g
