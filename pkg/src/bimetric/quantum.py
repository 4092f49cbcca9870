"""Bipartite quantum states, entanglement entropy, and Bell correlations.

The scalar field sourced by a measurement takes the value ``gamma * S``,
where ``S`` is the von Neumann entropy (in nats) of either reduced state of
a bipartite pure state.  Everything here is dense numpy linear algebra; the
Hilbert spaces involved are tiny (at most a few qubits/qutrits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .errors import (
    DimensionMismatchError,
    EigenvalueError,
    NonHermitianError,
    ValidationError,
)

LN2 = math.log(2.0)
TSIRELSON = 2.0 * math.sqrt(2.0)

_NORM_TOL = 1e-12
_HERMITIAN_TOL = 1e-12
_TRACE_TOL = 1e-12
_PSD_TOL = 1e-10
_ENTROPY_MATCH_TOL = 1e-10
# Eigenvalues below this floor are an error; values under the clip threshold
# contribute 0 * ln 0 := 0.
_EIGENVALUE_FLOOR = -1e-8
_EIGENVALUE_CLIP = 1e-12

_PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class EntanglementParams:
    """Dimensionless coupling between entropy and the scalar field value."""

    gamma: float = 1.0

    def __post_init__(self):
        if not (self.gamma >= 0.0):
            raise ValidationError(f"gamma must be >= 0, got {self.gamma!r}")


@dataclass(frozen=True)
class PureState:
    """Normalized state vector on a dim_a x dim_b product space."""

    dim_a: int
    dim_b: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValidationError("subsystem dimensions must be positive")
        amp = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amp.size != self.dim_a * self.dim_b:
            raise DimensionMismatchError(
                f"amplitude vector has length {amp.size}, "
                f"expected {self.dim_a * self.dim_b}"
            )
        norm_sq = float(np.sum(np.abs(amp) ** 2))
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValidationError(
                f"state is not normalized: sum |amp|^2 = {norm_sq!r}"
            )
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator.

    ``dim_a`` and ``dim_b`` record the bipartite factorization; a reduced
    state on a single subsystem uses ``dim_b = 1``.
    """

    matrix: np.ndarray
    dim_a: int
    dim_b: int

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = self.dim_a * self.dim_b
        if m.shape != (n, n):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match "
                f"dim_a * dim_b = {self.dim_a} * {self.dim_b}"
            )
        if float(np.max(np.abs(m - m.conj().T))) > _HERMITIAN_TOL:
            raise NonHermitianError("density matrix is not Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ValidationError(f"density matrix trace is {tr}, not 1")
        lowest = float(np.linalg.eigvalsh(m)[0])
        if lowest < -_PSD_TOL:
            raise ValidationError(
                f"density matrix has eigenvalue {lowest:.3e} < -{_PSD_TOL}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b


def schmidt_pair(theta: float) -> PureState:
    """Two-qubit state cos(theta)|00> + sin(theta)|11>."""
    amp = np.zeros(4, dtype=complex)
    amp[0] = math.cos(theta)
    amp[3] = math.sin(theta)
    return PureState(2, 2, amp)


def bell_state() -> PureState:
    """Maximally entangled two-qubit pair."""
    return schmidt_pair(math.pi / 4.0)


def product_state() -> PureState:
    """Unentangled |00>."""
    return schmidt_pair(0.0)


def to_density_matrix(psi: PureState) -> DensityMatrix:
    """Rank-one projector |psi><psi|."""
    m = np.outer(psi.amplitudes, psi.amplitudes.conj())
    return DensityMatrix(m, psi.dim_a, psi.dim_b)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionMismatchError("tensor_product expects 2-D matrices")
    if min(a.shape) < 1 or min(b.shape) < 1:
        raise DimensionMismatchError("tensor_product operands must be nonempty")
    return np.kron(a, b)


def partial_trace(rho: DensityMatrix, keep: str) -> DensityMatrix:
    """Trace out one subsystem of a bipartite state.

    Parameters
    ----------
    rho : DensityMatrix
        State on the dim_a x dim_b product space.
    keep : {"A", "B"}
        Which subsystem survives.
    """
    da, db = rho.dim_a, rho.dim_b
    m = rho.matrix
    if m.shape != (da * db, da * db):
        raise DimensionMismatchError(
            f"matrix of size {m.shape[0]} does not factor as {da} x {db}"
        )
    blocks = m.reshape(da, db, da, db)
    if keep == "A":
        return DensityMatrix(np.einsum("ijkj->ik", blocks), da, 1)
    if keep == "B":
        return DensityMatrix(np.einsum("ijil->jl", blocks), db, 1)
    raise ValidationError(f"keep must be 'A' or 'B', got {keep!r}")


def von_neumann_entropy(rho) -> float:
    """S = -Tr(rho ln rho) in nats, with 0 ln 0 := 0.

    Accepts a :class:`DensityMatrix` or a bare Hermitian array.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    evals = np.linalg.eigvalsh(m)
    lowest = float(evals[0])
    if lowest < _EIGENVALUE_FLOOR:
        raise EigenvalueError(
            f"eigenvalue {lowest:.6e} is below the noise floor {_EIGENVALUE_FLOOR}"
        )
    pos = evals[evals > _EIGENVALUE_CLIP]
    if pos.size == 0:
        return 0.0
    return float(-np.sum(pos * np.log(pos)))


def entanglement_entropy(psi: PureState) -> float:
    """Entropy of either reduced state of a pure state.

    Both reductions are computed; they must agree (equal Schmidt spectra),
    and a disagreement beyond tolerance is raised as a numerical failure.
    """
    rho = to_density_matrix(psi)
    s_a = von_neumann_entropy(partial_trace(rho, "A"))
    s_b = von_neumann_entropy(partial_trace(rho, "B"))
    if abs(s_a - s_b) > _ENTROPY_MATCH_TOL:
        raise EigenvalueError(
            f"reduced-state entropies disagree: {s_a!r} vs {s_b!r}"
        )
    return s_a


def entanglement_field_value(psi: PureState, params: EntanglementParams) -> float:
    """Scalar field value gamma * S sourced by a measured pure state."""
    return params.gamma * entanglement_entropy(psi)


def evolve_heisenberg(
    rho: DensityMatrix,
    h: np.ndarray,
    sigma: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> DensityMatrix:
    """Conjugate ``rho`` by exp(-i H sigma / (hbar c0)).

    ``sigma`` is the evolution parameter in metres.  The Hamiltonian must be
    Hermitian; the propagator is built by eigendecomposition, which is exact
    at these matrix sizes and preserves the spectrum of ``rho``.
    """
    h = np.asarray(h, dtype=complex)
    n = rho.dim
    if h.shape != (n, n):
        raise DimensionMismatchError(
            f"Hamiltonian shape {h.shape} does not match state dimension {n}"
        )
    scale = max(1.0, float(np.max(np.abs(h))))
    if float(np.max(np.abs(h - h.conj().T))) > _HERMITIAN_TOL * scale:
        raise NonHermitianError("Hamiltonian is not Hermitian")
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * w * (float(sigma) / (constants.hbar * constants.c0)))
    u = (v * phases) @ v.conj().T
    out = u @ rho.matrix @ u.conj().T
    out = 0.5 * (out + out.conj().T)  # strip Hermiticity roundoff
    return DensityMatrix(out, rho.dim_a, rho.dim_b)


def check_integrability(h_x: np.ndarray, h_xprime: np.ndarray, tol: float) -> bool:
    """True when two Hamiltonian densities commute to within ``tol``.

    The commutator norm used is the largest entry magnitude.
    """
    a = np.asarray(h_x, dtype=complex)
    b = np.asarray(h_xprime, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("operands must be square matrices")
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"operand shapes differ: {a.shape} vs {b.shape}"
        )
    comm = a @ b - b @ a
    return float(np.max(np.abs(comm))) <= tol


def _spin_axis(angle: float) -> np.ndarray:
    # Measurement direction confined to the x-z great circle.
    return math.cos(angle) * _PAULI_Z + math.sin(angle) * _PAULI_X


def correlation(psi: PureState, angle_a: float, angle_b: float) -> float:
    """E(a, b) = <sigma_a x sigma_b> for a two-qubit pure state."""
    if psi.dim_a != 2 or psi.dim_b != 2:
        raise DimensionMismatchError(
            f"correlations need a 2 x 2 system, got {psi.dim_a} x {psi.dim_b}"
        )
    op = np.kron(_spin_axis(angle_a), _spin_axis(angle_b))
    amp = psi.amplitudes
    return float(np.real(np.vdot(amp, op @ amp)))


def chsh_value(psi: PureState, angles) -> float:
    """CHSH combination E(a,b) + E(a,b') + E(a',b) - E(a',b').

    ``angles`` is the quadruple (a, a', b, b') of measurement directions in
    radians, all in the x-z plane.
    """
    a, a_prime, b, b_prime = (float(x) for x in angles)
    return (
        correlation(psi, a, b)
        + correlation(psi, a, b_prime)
        + correlation(psi, a_prime, b)
        - correlation(psi, a_prime, b_prime)
    )


def schmidt_entropy(theta: float) -> float:
    """Entropy of cos(theta)|00> + sin(theta)|11> as a function of theta."""
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    out = 0.0
    if c2 > _EIGENVALUE_CLIP:
        out -= c2 * math.log(c2)
    if s2 > _EIGENVALUE_CLIP:
        out -= s2 * math.log(s2)
    return out


def max_chsh_for_entropy(s: float) -> float:
    """Largest CHSH value reachable at entanglement entropy ``s`` (nats).

    Inverts the entropy of the Schmidt family over theta in [0, pi/4] by
    bisection, then evaluates 2*sqrt(1 + sin^2(2 theta)).  The bisection runs
    a fixed number of halvings (final bracket far below the 1e-10 tolerance),
    which keeps the map monotone to float precision.
    """
    s = float(s)
    if s < 0.0 or s > LN2 + 1e-12:
        raise ValidationError(f"entropy {s!r} outside [0, ln 2]")
    if s <= 0.0:
        return 2.0
    if s >= LN2:
        return TSIRELSON
    lo, hi = 0.0, math.pi / 4.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if schmidt_entropy(mid) < s:
            lo = mid
        else:
            hi = mid
    theta = 0.5 * (lo + hi)
    return 2.0 * math.sqrt(1.0 + math.sin(2.0 * theta) ** 2)
