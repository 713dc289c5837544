"""Closed-form hybrid beamforming for mmWave MIMO-OFDM."""

__version__ = "0.1.0"

from .beamform import (
    DigitalBeamformer,
    HybridBeamformer,
    SystemConfig,
    design_digital_baseline,
    design_hybrid,
)
from .channel import ChannelParams, ChannelRealization, generate_channel, realization_rng
from .evaluate import SweepResult, SweepSpec, run_sweep, spectral_efficiency

__all__ = [
    "ChannelParams",
    "ChannelRealization",
    "DigitalBeamformer",
    "HybridBeamformer",
    "SweepResult",
    "SweepSpec",
    "SystemConfig",
    "design_digital_baseline",
    "design_hybrid",
    "generate_channel",
    "realization_rng",
    "run_sweep",
    "spectral_efficiency",
]
