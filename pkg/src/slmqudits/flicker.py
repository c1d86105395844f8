"""Temporal phase-fluctuation model of the LCoS digital addressing scheme.

The displayed phase of every pixel breathes around its addressed value with
a common zero-mean triangular waveform; the excursion grows linearly with
the addressed phase, so a pixel showing phi displays phi * (1 + a * w(t)).
The fluctuation fraction a is the flicker level (0.2 to 0.6 in the sweeps,
up to 1.2 on short addressing sequences). All pixels share the waveform
phase: the flicker is device-wide, not per-pixel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FlickerSpec:
    """Triangular flicker model: fractional amplitude and samples per frame."""

    amplitude_fraction: float = 0.0
    samples_per_frame: int = 32

    def __post_init__(self):
        if not 0.0 <= self.amplitude_fraction <= 1.2:
            raise ValueError("flicker fraction outside [0, 1.2]")
        if self.samples_per_frame < 1:
            raise ValueError("need at least one time sample per frame")


def triangular_wave(t_frac):
    """Zero-mean unit-peak triangle: -1 at t=0, +1 at t=1/2, period 1."""
    t = np.mod(np.asarray(t_frac, dtype=float), 1.0)
    return np.where(t < 0.5, 4.0 * t - 1.0, 3.0 - 4.0 * t)


def time_samples(T: int) -> np.ndarray:
    """T equally spaced phases {k/T} of the flicker period."""
    if T < 1:
        raise ValueError("T must be >= 1")
    return np.arange(T) / T


def flicker_scales(spec: FlickerSpec) -> np.ndarray:
    """Multiplicative factors 1 + a*w(k/T) for one frame of time samples."""
    return 1.0 + spec.amplitude_fraction * triangular_wave(time_samples(spec.samples_per_frame))


def instantaneous_mask(mask, spec: FlickerSpec, t_frac: float):
    """Mask as displayed at frame phase t_frac: every sample scaled in place.

    The scaling applies to the full displayed value, mean offset and PA
    added phase included; that is the mechanism that scrambles PA phases
    while leaving GD displacements untouched.
    """
    from .gratings import PhaseMask

    samples = mask.samples if isinstance(mask, PhaseMask) else np.asarray(mask)
    scale = 1.0 + spec.amplitude_fraction * float(triangular_wave(t_frac))
    out = samples * scale
    return PhaseMask(out) if isinstance(mask, PhaseMask) else out
