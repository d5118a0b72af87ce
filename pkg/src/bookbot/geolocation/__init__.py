"""GPS simulation: pseudorange synthesis, trilateration, NMEA sentences."""

from .nmea import (
    ChecksumMismatch,
    GgaFix,
    IllegalCharacter,
    MalformedField,
    RmcFix,
    SceneAnchor,
    emit_gga,
    emit_rmc,
    make_sentence,
    nmea_checksum,
    parse_gga,
    parse_rmc,
)
from .trilateration import (
    DegenerateGeometry,
    FixSolution,
    InsufficientSatellites,
    SatelliteObs,
    SingularGeometry,
    synthesize_obs,
    trilaterate,
)

# Receiver constants for the simulated 50-channel module.
RECEIVER_CHANNELS = 50
RECEIVER_SENSITIVITY_DBM = -161
RECEIVER_SUPPLY_MA = 45
RECEIVER_MAX_TRACKED = 22

__all__ = [
    "ChecksumMismatch", "DegenerateGeometry", "FixSolution", "GgaFix",
    "IllegalCharacter", "InsufficientSatellites", "MalformedField",
    "RECEIVER_CHANNELS", "RECEIVER_MAX_TRACKED", "RECEIVER_SENSITIVITY_DBM",
    "RECEIVER_SUPPLY_MA", "RmcFix", "SatelliteObs", "SceneAnchor",
    "SingularGeometry", "emit_gga", "emit_rmc", "make_sentence",
    "nmea_checksum", "parse_gga", "parse_rmc", "synthesize_obs", "trilaterate",
]
