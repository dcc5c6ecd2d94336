"""Coherent orbital-angular-momentum transfer in cascaded Raman sideband
generation: vortex-beam construction and metrology, phase-plate and mirror
optics, the sideband frequency/charge selection rules, double-source fork
interferograms with automated charge readout, and chirped-pulse/comb
temporal synthesis."""

from .beams import (
    BeamParams,
    LGModeIndex,
    decompose,
    far_field,
    gaussian_field,
    lg_mode_field,
    measure_charge_circulation,
    propagate,
    ring_radius,
)
from .cascade import (
    CombChannel,
    RamanConfig,
    SidebandKind,
    SidebandLabel,
    SpectralComb,
    build_comb,
    cascade_phase_recursion,
    conservation_check,
    observed_sideband,
    sideband_charge,
    sideband_frequency,
    spatial_sideband,
)
from .elements import (
    ReflectionParity,
    SppSpec,
    apply_lens,
    apply_mirror,
    apply_spp,
    apply_tilt,
    crystal_charges,
    path_charge,
)
from .grids import ComplexFieldGrid, GridSpec
from .interferometry import (
    ChargeReading,
    Interferogram,
    add_intensity_noise,
    OrderResult,
    PanelGeometry,
    analyze_order_panel,
    extract_charge,
    fork_fringe_count,
    fringe_visibility,
    synthesize_interferogram,
)
from .pulses import (
    ChirpedPulsePair,
    TimeGrid,
    beat_frequency,
    chirped_pair_field,
    envelope_modulation_frequency,
    synthesize_waveform,
    train_period,
)

__version__ = "0.1.0"

__all__ = [
    "BeamParams",
    "ChargeReading",
    "ChirpedPulsePair",
    "CombChannel",
    "ComplexFieldGrid",
    "GridSpec",
    "Interferogram",
    "LGModeIndex",
    "OrderResult",
    "PanelGeometry",
    "RamanConfig",
    "ReflectionParity",
    "SidebandKind",
    "SidebandLabel",
    "SpectralComb",
    "SppSpec",
    "TimeGrid",
    "add_intensity_noise",
    "analyze_order_panel",
    "apply_lens",
    "apply_mirror",
    "apply_spp",
    "apply_tilt",
    "beat_frequency",
    "build_comb",
    "cascade_phase_recursion",
    "chirped_pair_field",
    "conservation_check",
    "crystal_charges",
    "decompose",
    "envelope_modulation_frequency",
    "extract_charge",
    "far_field",
    "fork_fringe_count",
    "fringe_visibility",
    "gaussian_field",
    "lg_mode_field",
    "measure_charge_circulation",
    "observed_sideband",
    "path_charge",
    "propagate",
    "ring_radius",
    "sideband_charge",
    "sideband_frequency",
    "spatial_sideband",
    "synthesize_interferogram",
    "synthesize_waveform",
    "train_period",
]
