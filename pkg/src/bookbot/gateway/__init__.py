"""Process entry point: configuration, simulation loop, HTTP + teleop."""

from .app import Gateway, resolve_token
from .config import (
    DEFAULT_EPOCH_MS,
    GatewayConfig,
    Scenario,
    ScenarioError,
    load_catalog,
    load_loans,
    load_roster,
    load_scenario,
)
from .kiosk import KioskManager, KioskNeedsBarcode, KioskSessionUnknown
from .script import ScriptError, encode_token_qr, load_script
from .simloop import TICK_MS, SimClock, Simulation, TelemetrySnapshot
from .streams import StreamBroadcaster

__all__ = [
    "DEFAULT_EPOCH_MS", "Gateway", "GatewayConfig", "KioskManager",
    "KioskNeedsBarcode", "KioskSessionUnknown", "Scenario", "ScenarioError",
    "ScriptError", "SimClock", "Simulation", "StreamBroadcaster",
    "TICK_MS", "TelemetrySnapshot", "encode_token_qr", "load_catalog",
    "load_loans", "load_roster", "load_scenario", "load_script",
    "resolve_token",
]
