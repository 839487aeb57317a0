"""Polarizable particle in a line-charge electric field and a uniform magnetic field.

Channel analysis of the planar effective Hamiltonian, radial spectra with
hard-core regularization, holonomy of the induced gauge potential and
classical capture dynamics.
"""

__version__ = "0.1.0"

from .core import (
    Channel,
    ChannelClass,
    Couplings,
    FieldConfig,
    ParticleParams,
    WellPosednessReport,
    channel_coefficient,
    classify_channel,
    effective_gauge_potential,
    reduce,
    scalar_potential,
    well_posedness,
)
from .kernels import BACKEND

__all__ = [
    "BACKEND",
    "Channel",
    "ChannelClass",
    "Couplings",
    "FieldConfig",
    "ParticleParams",
    "WellPosednessReport",
    "channel_coefficient",
    "classify_channel",
    "effective_gauge_potential",
    "reduce",
    "scalar_potential",
    "well_posedness",
]
