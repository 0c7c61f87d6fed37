"""Pumped multi-level transmon in front of a mirror."""

from ._core import (
    CrossMode,
    LevelMode,
    MirrorampError,
    Model,
    ReflectionConvention,
    TransmonParams,
    __version__,
    dbm_to_rabi_hz,
    emission_spectrum,
    fit_circle,
    harmonic_balance,
    idealized_sideband_count,
    linear_response,
    rabi_hz_to_dbm,
    reflection_map,
    run_config,
    sideband_catalog,
    single_tone,
    steady_state,
)

__all__ = [
    "CrossMode",
    "LevelMode",
    "MirrorampError",
    "Model",
    "ReflectionConvention",
    "TransmonParams",
    "__version__",
    "dbm_to_rabi_hz",
    "emission_spectrum",
    "fit_circle",
    "harmonic_balance",
    "idealized_sideband_count",
    "linear_response",
    "rabi_hz_to_dbm",
    "reflection_map",
    "run_config",
    "sideband_catalog",
    "single_tone",
    "steady_state",
]
