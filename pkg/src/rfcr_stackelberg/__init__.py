"""Stackelberg spectrum sharing in an RF-powered cognitive radio network."""

from .channel import (
    ChannelRealization,
    DegenerateChannelError,
    EffectiveGains,
    Topology,
    effective_gains,
    path_loss,
    sample_channel,
    zf_projectors,
    zf_weights,
)
from .game import Equilibrium, Mode, stackelberg_equilibrium
from .rates import SystemParams

__all__ = [
    "ChannelRealization",
    "DegenerateChannelError",
    "EffectiveGains",
    "Equilibrium",
    "Mode",
    "SystemParams",
    "Topology",
    "effective_gains",
    "path_loss",
    "sample_channel",
    "stackelberg_equilibrium",
    "zf_projectors",
    "zf_weights",
]
