"""Blazed phase gratings for encoding complex slit amplitudes on a phase-only SLM.

Each slit of the aperture is covered by a blazed (sawtooth) phase grating of
period ``p`` pixels, quantized to ``N`` phase levels. The modulation depth
controls how much light the slit diffracts into the first order, which sets
the coefficient amplitude; the coefficient phase is set either by adding a
constant phase to the grating (PA method) or by displacing the grating
laterally by an integer number of pixels (GD method, phase 2 pi delta / p
per pixel of displacement).

The displayed mask is the quantized ramp shifted to a mean of (N-1)/N*pi,
the positive-valued stand-in for a zero-mean grating on a device that can
only show non-negative phases. That mean choice makes the first-order
coefficient of an undisplaced grating (almost) real, so displacement and
added phase act on a clean zero reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import StateVector

TWO_PI = 2 * np.pi

# Bisection controls for depth_for_amplitude.
_BISECT_TOL = 1e-12
_BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class GratingSpec:
    """Per-slit blazed-grating parameters.

    depth_phi0:         phase modulation depth, 0 .. 2*pi*(N-1)/N
    period_p:           grating period in pixels
    displacement_delta: integer lateral shift in pixels (GD phase control)
    added_phase:        constant phase added to the mask (PA phase control)
    levels_N:           number of quantization levels of the ramp
    """

    depth_phi0: float
    period_p: int
    displacement_delta: int = 0
    added_phase: float = 0.0
    levels_N: int = 16

    def __post_init__(self):
        if self.period_p < 2:
            raise ValueError("grating period must be >= 2 pixels")
        if self.levels_N < 2:
            raise ValueError("need >= 2 quantization levels")
        top = TWO_PI * (self.levels_N - 1) / self.levels_N
        if not -1e-12 <= self.depth_phi0 <= top + 1e-12:
            raise ValueError(f"depth {self.depth_phi0!r} outside [0, 2pi(N-1)/N]")
        if not 0 <= self.displacement_delta < self.period_p:
            raise ValueError("displacement must lie in [0, p)")
        if not 0.0 <= self.added_phase < TWO_PI:
            raise ValueError("added phase must lie in [0, 2pi)")


@dataclass(frozen=True)
class PhaseMask:
    """Phase values over one grating period, one entry per pixel.

    Addressed masks (the builder's output) are non-negative because the SLM
    only displays positive phases; instantaneous flickered masks may dip
    below zero when the fluctuation fraction exceeds 1.
    """

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("mask needs at least 2 pixels")
        if not np.all(np.isfinite(s)):
            raise ValueError("mask samples must be finite")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    @property
    def period(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class EncodedState:
    """One grating spec per slit plus the phase-encoding method used."""

    gratings: tuple
    method: str

    def __post_init__(self):
        if self.method not in ("PA", "GD"):
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def dim(self) -> int:
        return len(self.gratings)


def first_order_efficiency(phi0: float) -> float:
    """First-order diffraction efficiency sinc^2(1 - phi0/2pi) of an ideal blaze."""
    if not 0.0 <= phi0 <= TWO_PI:
        raise ValueError(f"modulation depth {phi0!r} outside [0, 2pi]")
    return float(np.sinc(1.0 - phi0 / TWO_PI) ** 2)


def depth_for_amplitude(amp: float, levels_N: int) -> float:
    """Invert the efficiency law: depth whose first-order amplitude is amp.

    Amplitudes are relative to the deepest representable ramp, so amp = 1
    maps to phi0 = (N-1)/N * 2*pi and amp = 0 to a flat mask. Found by
    bisection; the efficiency is strictly increasing in the depth.
    """
    if not 0.0 <= amp <= 1.0:
        raise ValueError(f"amplitude {amp!r} outside [0, 1]")
    top = TWO_PI * (levels_N - 1) / levels_N
    if amp == 0.0:
        return 0.0
    if amp == 1.0:
        return top
    target = amp * np.sqrt(first_order_efficiency(top))
    lo, hi = 0.0, top
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if np.sqrt(first_order_efficiency(mid)) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < _BISECT_TOL:
            break
    return 0.5 * (lo + hi)


def build_blazed_mask(spec: GratingSpec, wrap_at_2pi: bool = False) -> PhaseMask:
    """Quantized blazed ramp for one slit.

    Pixel x carries ramp level floor(N * frac((x + delta)/p)), scaled so the
    ramp spans [0, phi0], then offset so the mask mean is (N-1)/N * pi, then
    shifted by the PA added phase. A displacement by delta cyclically
    advances the pattern so the first-order phase grows by 2*pi*delta/p.

    With wrap_at_2pi the displayed values are reduced mod 2*pi, modelling an
    SLM whose modulation range ends at 2*pi. GD masks never exceed 2*pi, so
    wrapping only ever alters PA masks.
    """
    p, n = spec.period_p, spec.levels_N
    x = np.arange(p)
    level = np.floor(n * (((x + spec.displacement_delta) % p) / p))
    base = spec.depth_phi0 * level / (n - 1)
    offset = (n - 1) / n * np.pi - base.mean()
    samples = base + offset + spec.added_phase
    if wrap_at_2pi:
        samples = np.mod(samples, TWO_PI)
    if np.min(samples) < -1e-12:
        raise ValueError("mask has negative samples; the SLM cannot display them")
    return PhaseMask(np.maximum(samples, 0.0))


def displacement_for_phase(theta: float, period_p: int) -> int:
    """Nearest integer grating displacement realizing phase theta.

    The achieved phase 2*pi*delta/p differs from theta by at most pi/p,
    half of the grating's phase resolution.
    """
    return int(np.round(period_p * theta / TWO_PI)) % period_p


def first_order_coefficient(mask: PhaseMask | np.ndarray) -> complex:
    """Complex first-diffraction-order coefficient of a displayed mask.

    Each pixel is a flat phase segment of unit width centered on its integer
    coordinate, so the coefficient is the first Fourier component of the
    piecewise-constant transmission exp(i*mask): the plain DFT of the
    sampled phasors times the real pixel-aperture factor sinc(1/p). At the
    deepest N = p ramp this reproduces the textbook quantized-blaze
    efficiency |t1|^2 = sinc^2(1/N), the value the ideal-blaze law gives at
    phi0 = (N-1)/N * 2*pi; centering the pixels keeps the undisplaced
    ramp's coefficient real there.

    Cyclically advancing the mask by delta pixels multiplies the result by
    e^{i 2 pi delta / p} exactly (DFT shift theorem).
    """
    samples = mask.samples if isinstance(mask, PhaseMask) else np.asarray(mask)
    p = samples.shape[-1]
    x = np.arange(p)
    dft = np.exp(1j * samples) @ np.exp(-2j * np.pi * x / p) / p
    return complex(np.sinc(1.0 / p) * dft)


def first_order_coefficients(masks: np.ndarray) -> np.ndarray:
    """Vectorized first_order_coefficient over the last axis of a mask stack."""
    p = masks.shape[-1]
    x = np.arange(p)
    dft = np.exp(1j * masks) @ (np.exp(-2j * np.pi * x / p) / p)
    return np.sinc(1.0 / p) * dft


def intrinsic_phase(depth_phi0: float, period_p: int, levels_N: int) -> float:
    """Residual first-order phase of an undisplaced, unshifted ramp.

    The quantized ramp's coefficient is not exactly real at every depth;
    encode_state subtracts this term per slit so the grating at delta = 0,
    added_phase = 0 defines phase zero.
    """
    if depth_phi0 == 0.0:
        return 0.0
    mask = build_blazed_mask(GratingSpec(depth_phi0, period_p, 0, 0.0, levels_N))
    return float(np.angle(first_order_coefficient(mask)))


def encode_state(state: StateVector, method: str, p: int, N: int) -> EncodedState:
    """Choose per-slit grating parameters that realize the target state.

    Amplitude |c_l| picks the depth through the efficiency law. The target
    phase, corrected for the depth-dependent intrinsic coefficient phase, is
    realized by an integer displacement (GD) or by the added constant (PA).
    """
    if method not in ("PA", "GD"):
        raise ValueError(f"unknown method {method!r}")
    specs = []
    for c in state.coeffs:
        depth = depth_for_amplitude(abs(c), N)
        target = (np.angle(c) - intrinsic_phase(depth, p, N)) % TWO_PI
        if method == "GD":
            specs.append(GratingSpec(depth, p, displacement_for_phase(target, p), 0.0, N))
        else:
            specs.append(GratingSpec(depth, p, 0, target, N))
    return EncodedState(tuple(specs), method)


def encoded_masks(enc: EncodedState, wrap_at_2pi: bool = False) -> np.ndarray:
    """Stack the per-slit masks of an encoded state into a (D, p) array."""
    return np.stack([build_blazed_mask(g, wrap_at_2pi).samples for g in enc.gratings])


def decode_state(enc: EncodedState, wrap_at_2pi: bool = False) -> StateVector:
    """First-order coefficients of every slit, renormalized to a state.

    This is the flicker-free far-field readout; it round-trips encode_state
    up to the grating's phase resolution and the efficiency-law mismatch of
    the quantized ramp.
    """
    from .states import normalize_state

    return normalize_state(first_order_coefficients(encoded_masks(enc, wrap_at_2pi)))


def mask_to_levels(mask: PhaseMask, phi_max: float = TWO_PI) -> np.ndarray:
    """8-bit gray levels of a mask: level = round(255 * phase / phi_max).

    The mapping is exact and invertible up to the 1/255 step; values beyond
    phi_max (unwrapped PA masks) are clipped.
    """
    levels = np.round(255.0 * mask.samples / phi_max)
    return np.clip(levels, 0, 255).astype(np.uint8)


def export_mask_pgm(mask: PhaseMask, path, phi_max: float = TWO_PI) -> None:
    """Write a mask as a plain-text PGM (P2) gray image, one row, maxval 255."""
    levels = mask_to_levels(mask, phi_max)
    lines = ["P2", f"{levels.size} 1", "255", " ".join(str(v) for v in levels)]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
