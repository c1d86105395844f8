"""Mutually unbiased bases and the semi-analytic detector of the 4f setup.

The prepared field reaches the detector after the projection SLM displays
the conjugated measurement state, so the on-axis first-order intensity is
|sum_l c_l conj(b_l)|^2: the Born overlap of the (unnormalized) prepared
coefficients with the projector. Tomography runs over the D+1 mutually
unbiased bases of a prime dimension, incoherently averaging the detector
intensity over one flicker period of the preparation SLM and normalizing
the frequencies within each basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flicker import FlickerSpec, flicker_scales
from .gratings import encode_state, encoded_masks, first_order_coefficients
from .states import StateVector

MUB_TOL = 1e-12


class UnsupportedDimensionError(ValueError):
    """MUB construction is only available for prime dimensions."""


@dataclass(frozen=True)
class ProjectorSet:
    """D+1 orthonormal bases, pairwise mutually unbiased.

    bases[j] is a (D, D) array whose rows are the basis vectors; basis 0 is
    computational.
    """

    bases: tuple

    @property
    def dim(self) -> int:
        return self.bases[0].shape[0]

    def stacked(self) -> np.ndarray:
        """All projector vectors as one ((D+1)*D, D) array, basis-major."""
        return np.concatenate(self.bases, axis=0)


@dataclass(frozen=True)
class MeasurementRecord:
    """Normalized detection frequency of one projector."""

    basis: int
    outcome: int
    frequency: float


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


def mub_bases(dim: int) -> ProjectorSet:
    """The D+1 mutually unbiased bases of a prime dimension.

    For D = 2 these are the three Pauli eigenbases. For odd prime D, basis j
    has vectors (1/sqrt D) sum_n w^(j n^2 + k n) |n> with w = exp(2 pi i/D),
    plus the computational basis.
    """
    if not _is_prime(dim):
        raise UnsupportedDimensionError(
            f"MUB construction needs a prime dimension, got {dim}")
    comp = np.eye(dim, dtype=complex)
    if dim == 2:
        s = 1 / np.sqrt(2)
        bases = (
            comp,
            np.array([[s, s], [s, -s]], dtype=complex),
            np.array([[s, 1j * s], [s, -1j * s]], dtype=complex),
        )
        return ProjectorSet(bases)
    omega = np.exp(2j * np.pi / dim)
    n = np.arange(dim)
    bases = [comp]
    for j in range(dim):
        rows = [omega ** ((j * n * n + k * n) % dim) / np.sqrt(dim) for k in range(dim)]
        b = np.array(rows)
        b.flags.writeable = False
        bases.append(b)
    return ProjectorSet(tuple(bases))


def detector_intensity(prepared, projector) -> float:
    """On-axis first-order intensity |sum_l c_l conj(b_l)|^2."""
    c = np.asarray(prepared, dtype=complex)
    b = projector.coeffs if isinstance(projector, StateVector) else np.asarray(projector)
    if c.shape != b.shape:
        raise ValueError("prepared coefficients and projector differ in length")
    return float(np.abs(c @ b.conj()) ** 2)


def tomography_frequencies(
    target: StateVector,
    method: str,
    p: int,
    N: int,
    flicker: FlickerSpec,
    projectors: ProjectorSet | None = None,
    wrap_at_2pi: bool = False,
    quantize_slm2: bool = False,
    shot_counts: int | None = None,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Per-basis normalized MUB frequencies, shape (D+1, D).

    For each flicker phase of the preparation SLM the instantaneous
    first-order slit coefficients are read out and projected onto every MUB
    vector; intensities are averaged incoherently over the frame and then
    normalized within each basis. The projection SLM is ideal (no flicker,
    no quantization) unless quantize_slm2 imposes the same p/N grating
    model on the projector states. With shot_counts, Poisson counts with
    that expected total per basis replace the exact intensities.
    """
    if projectors is None:
        projectors = mub_bases(target.dim)
    masks = encoded_masks(encode_state(target, method, p, N), wrap_at_2pi)
    scales = flicker_scales(flicker)
    coeffs = first_order_coefficients(scales[:, None, None] * masks[None, :, :])

    proj = projectors.stacked()
    if quantize_slm2:
        proj = np.stack([
            first_order_coefficients(encoded_masks(encode_state(StateVector(row), method, p, N)))
            for row in proj
        ])
    amps = coeffs @ proj.conj().T
    intensities = np.mean(np.abs(amps) ** 2, axis=0)

    dim = target.dim
    freqs = intensities.reshape(dim + 1, dim)
    if shot_counts is not None:
        if rng is None:
            rng = np.random.default_rng(0)
        expected = freqs / freqs.sum(axis=1, keepdims=True) * shot_counts
        freqs = rng.poisson(expected).astype(float)
        zero = freqs.sum(axis=1) == 0
        freqs[zero] = 1.0
    return freqs / freqs.sum(axis=1, keepdims=True)


def simulate_tomography(
    target: StateVector,
    method: str,
    p: int,
    N: int,
    flicker: FlickerSpec,
    **kwargs,
) -> list[MeasurementRecord]:
    """Run the measurement simulation and flatten it to MeasurementRecords."""
    freqs = tomography_frequencies(target, method, p, N, flicker, **kwargs)
    return [
        MeasurementRecord(j, k, float(freqs[j, k]))
        for j in range(freqs.shape[0])
        for k in range(freqs.shape[1])
    ]


def records_to_frequencies(records, dim: int) -> np.ndarray:
    """Rebuild the (D+1, D) frequency table from a record list."""
    freqs = np.zeros((dim + 1, dim))
    for rec in records:
        freqs[rec.basis, rec.outcome] = rec.frequency
    return freqs
