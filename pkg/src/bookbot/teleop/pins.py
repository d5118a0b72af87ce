"""Virtual pin directory: direction and value grammar per pin."""

from __future__ import annotations

import re
from dataclasses import dataclass

APP_TO_DEVICE = "app->device"
DEVICE_TO_APP = "device->app"

_DPAD_VALUES = ("N", "S", "E", "W", "STOP")
_INT_RE = re.compile(r"^-?\d+$")
_LATLON_RE = re.compile(r"^-?\d+(\.\d+)?,-?\d+(\.\d+)?$")


class UnknownPin(ValueError):
    pass

class WrongDirection(ValueError):
    pass

class BadValueGrammar(ValueError):
    pass


@dataclass(frozen=True)
class PinSpec:
    name: str
    direction: str
    description: str
    validator: object

    def validate(self, value: str) -> None:
        if not self.validator(value):
            raise BadValueGrammar(f"{self.name} rejects value {value!r}")


PIN_MAP = {
    "V0": PinSpec("V0", APP_TO_DEVICE, "drive d-pad", lambda v: v in _DPAD_VALUES),
    "V1": PinSpec("V1", DEVICE_TO_APP, "ultrasonic distance cm", lambda v: bool(_INT_RE.match(v))),
    "V2": PinSpec("V2", DEVICE_TO_APP, "gps lat,lon", lambda v: bool(_LATLON_RE.match(v))),
    "V3": PinSpec("V3", DEVICE_TO_APP, "inventory weight grams", lambda v: bool(_INT_RE.match(v))),
    "V4": PinSpec("V4", DEVICE_TO_APP, "inventory book count", lambda v: bool(_INT_RE.match(v))),
}


def lookup(pin: str) -> PinSpec:
    spec = PIN_MAP.get(pin)
    if spec is None:
        raise UnknownPin(f"no virtual pin {pin!r}")
    return spec


def check_write(pin: str, value: str, writer_role: str) -> PinSpec:
    """Validate a virtual write coming from an app or device session."""
    spec = lookup(pin)
    expected = APP_TO_DEVICE if writer_role == "app" else DEVICE_TO_APP
    if spec.direction != expected:
        raise WrongDirection(f"{pin} is {spec.direction}, written by {writer_role}")
    spec.validate(value)
    return spec
