"""Acoustic wake-up node toolkit: coherence scoring, front-end models, power simulation, calibration."""

from ._core import (
    CalibrationCurve,
    CircuitParams,
    WakenodeError,
    adc_to_db,
    amplifier_gain,
    amplify,
    battery_lifetime_days,
    builtin_profiles,
    coherence_score,
    common_mode,
    db_to_adc,
    envelope_detect,
    find_delay,
    fit_curve,
    gain_db,
    magnitude_squared_coherence,
    peak_envelope,
    rank_microphones,
    resample,
    savings_percent,
    simulate,
    threshold_out,
    urban_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationCurve",
    "CircuitParams",
    "WakenodeError",
    "adc_to_db",
    "amplifier_gain",
    "amplify",
    "battery_lifetime_days",
    "builtin_profiles",
    "coherence_score",
    "common_mode",
    "db_to_adc",
    "envelope_detect",
    "find_delay",
    "fit_curve",
    "gain_db",
    "magnitude_squared_coherence",
    "peak_envelope",
    "rank_microphones",
    "resample",
    "savings_percent",
    "simulate",
    "threshold_out",
    "urban_scenario",
]
