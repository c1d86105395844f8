"""Pure-state and density-matrix types, fidelity, and state samplers.

States live in the which-slit basis of a D-slit aperture: a spatial qudit
is a unit vector of D complex slit amplitudes. Samplers provide the
latitude-longitude Bloch grid used for qubit sweeps and Haar-random states
for higher dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
DENSITY_TOL = 1e-10


class DegenerateStateError(ValueError):
    """Raised when asked to normalize an all-zero coefficient vector."""


@dataclass(frozen=True)
class StateVector:
    """Pure spatial-qudit state: D complex slit coefficients with unit norm."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size < 2:
            raise ValueError("state needs at least 2 coefficients")
        norm2 = float(np.sum(np.abs(c) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"coefficients not normalized: sum |c|^2 = {norm2!r}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.coeffs.size


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite D x D matrix."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > DENSITY_TOL:
            raise ValueError("density matrix not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > DENSITY_TOL:
            raise ValueError(f"density matrix trace {tr!r} != 1")
        if np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))) < -DENSITY_TOL:
            raise ValueError("density matrix has negative eigenvalue")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class BlochAngles:
    """Qubit Bloch-sphere point: latitude theta in [0, pi], longitude phi in (-pi, pi]."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta {self.theta!r} outside [0, pi]")
        if not -np.pi < self.phi <= np.pi:
            raise ValueError(f"phi {self.phi!r} outside (-pi, pi]")


@dataclass(frozen=True)
class ApertureGeometry:
    """Slit-aperture geometry, recorded as metadata only.

    The transverse envelope is taken constant across the slit region, so
    these lengths never enter the propagation model; they document the
    physical aperture a state refers to. Units are arbitrary but shared.
    """

    slit_halfwidth_a: float
    slit_period_d: float
    slit_length_L: float

    def __post_init__(self):
        if not 2 * self.slit_halfwidth_a < self.slit_period_d:
            raise ValueError("slits overlap: need 2a < d")

    def slit_centers(self, dim: int) -> np.ndarray:
        """Center offsets eta_l = l + (D-1)/2 in units of the slit period."""
        return np.arange(dim) + (dim - 1) / 2


def normalize_state(raw) -> StateVector:
    """Normalize raw complex slit amplitudes to a unit-norm StateVector."""
    c = np.asarray(raw, dtype=complex)
    norm = np.linalg.norm(c)
    if norm == 0.0:
        raise DegenerateStateError("degenerate state: all coefficients zero")
    return StateVector(c / norm)


def bloch_state(angles: BlochAngles) -> StateVector:
    """Qubit state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    return StateVector(np.array([
        np.cos(angles.theta / 2),
        np.exp(1j * angles.phi) * np.sin(angles.theta / 2),
    ]))


def sample_bloch_grid(n_theta: int, n_phi: int) -> list[BlochAngles]:
    """Regular latitude-longitude grid covering the Bloch sphere.

    Latitudes span [0, pi] inclusive (both poles are kept as full rows so
    the grid stays regular); longitudes are cell-centered on (-pi, pi].
    The default sweep resolution is 44 x 48 = 2112 points.
    """
    if n_theta < 2:
        raise ValueError("need at least 2 latitudes to include both poles")
    if n_phi < 1:
        raise ValueError("need at least 1 longitude")
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = -np.pi + 2 * np.pi * (np.arange(n_phi) + 0.5) / n_phi
    return [BlochAngles(float(t), float(p)) for t in thetas for p in phis]


def sample_haar(dim: int, n: int, seed: int) -> list[StateVector]:
    """Draw n Haar-random pure states by normalizing complex Gaussian vectors."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return [StateVector(row) for row in z]


def density_from_pure(state: StateVector) -> DensityMatrix:
    """Rank-1 projector |psi><psi|."""
    return DensityMatrix(np.outer(state.coeffs, state.coeffs.conj()))


def fidelity(target: StateVector, rho: DensityMatrix) -> float:
    """Overlap <psi| rho |psi> between a pure target and a density matrix."""
    if target.dim != rho.dim:
        raise ValueError(f"dimension mismatch: state {target.dim}, rho {rho.dim}")
    val = target.coeffs.conj() @ rho.entries @ target.coeffs
    if abs(val.imag) >= 1e-10:
        raise AssertionError(f"fidelity has imaginary part {val.imag!r}")
    return float(val.real)
