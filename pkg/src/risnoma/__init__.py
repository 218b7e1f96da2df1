"""Physical-layer-security simulator for a RIS-aided two-user NOMA downlink.

Provides channel generation, alternating phase/beamformer optimization,
null-space artificial-noise design, closed-form power allocation and Monte
Carlo secrecy-rate/outage estimation, plus a sweep-experiment CLI.
"""

from .an_beamforming import AnBeamformer, algorithm2_blind, algorithm3_csi, an_leakage
from .beamforming import (
    KERNEL_BACKEND,
    IterationTrace,
    RisConfig,
    algorithm1,
    baseline_no_bf,
    reduced_phase_objective,
)
from .channels import ChannelSet, EffectiveGains, effective_gains, perturb_csi, sample_channels
from .config import DomainError, Geometry, SystemConfig
from .metrics import (
    SCHEME_IDS,
    ScenarioResult,
    SnrSet,
    average_secrecy_rate,
    estimate_sop,
    run_scheme,
    secrecy_rate_external,
    secrecy_rate_internal,
    snrs,
)
from .power_allocation import (
    PowerSplit,
    RegionPoints,
    f_r,
    region_points,
    solve_internal,
    solve_no_csi,
    solve_with_csi,
)

__version__ = "0.1.0"

__all__ = [
    "AnBeamformer",
    "ChannelSet",
    "DomainError",
    "EffectiveGains",
    "Geometry",
    "IterationTrace",
    "KERNEL_BACKEND",
    "PowerSplit",
    "RegionPoints",
    "RisConfig",
    "SCHEME_IDS",
    "ScenarioResult",
    "SnrSet",
    "SystemConfig",
    "algorithm1",
    "algorithm2_blind",
    "algorithm3_csi",
    "an_leakage",
    "average_secrecy_rate",
    "baseline_no_bf",
    "effective_gains",
    "estimate_sop",
    "f_r",
    "perturb_csi",
    "reduced_phase_objective",
    "region_points",
    "run_scheme",
    "sample_channels",
    "secrecy_rate_external",
    "secrecy_rate_internal",
    "snrs",
    "solve_internal",
    "solve_no_csi",
    "solve_with_csi",
]
