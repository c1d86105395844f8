"""Spatial-qudit preparation on a phase-only SLM.

Simulates the preparation of D-dimensional spatial qudits with blazed phase
gratings on a flickering LCoS, their projective measurement in mutually
unbiased bases, and maximum-likelihood reconstruction, comparing the
grating-displacement (GD) and phase-addition (PA) phase-encoding methods.
"""

from .states import (
    ApertureGeometry,
    BlochAngles,
    DegenerateStateError,
    DensityMatrix,
    StateVector,
    bloch_state,
    density_from_pure,
    fidelity,
    normalize_state,
    sample_bloch_grid,
    sample_haar,
)
from .gratings import (
    EncodedState,
    GratingSpec,
    PhaseMask,
    build_blazed_mask,
    decode_state,
    depth_for_amplitude,
    displacement_for_phase,
    encode_state,
    encoded_masks,
    export_mask_pgm,
    first_order_coefficient,
    first_order_coefficients,
    first_order_efficiency,
    intrinsic_phase,
    mask_to_levels,
)
from .flicker import (
    FlickerSpec,
    flicker_scales,
    instantaneous_mask,
    time_samples,
    triangular_wave,
)
from .measurement import (
    MeasurementRecord,
    ProjectorSet,
    UnsupportedDimensionError,
    detector_intensity,
    mub_bases,
    simulate_tomography,
    tomography_frequencies,
)
from .tomography import MLEConfig, MLEResult, mle_reconstruct

__version__ = "0.1.0"
