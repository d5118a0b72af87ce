"""Blynk-style teleoperation protocol: framing, sessions, TCP hub."""

from .framing import (
    HARDWARE,
    LOGIN,
    PING,
    RESPONSE,
    STATUS_BAD_VALUE,
    STATUS_ILLEGAL_COMMAND,
    STATUS_INVALID_TOKEN,
    STATUS_OK,
    STATUS_UNKNOWN_PIN,
    STATUS_WRONG_DIRECTION,
    NeedMoreBytes,
    OversizeBody,
    TeleopFrame,
    decode_frame,
    encode_frame,
    hardware_body,
    hardware_frame,
    response,
)
from .pins import PIN_MAP, BadValueGrammar, UnknownPin, WrongDirection, check_write
from .session import HEARTBEAT_TIMEOUT_S, TOKEN_LENGTH, ProtocolSession
from .server import TeleopHub, TeleopServer

__all__ = [
    "BadValueGrammar", "HARDWARE", "HEARTBEAT_TIMEOUT_S", "LOGIN",
    "NeedMoreBytes", "OversizeBody", "PIN_MAP", "PING", "ProtocolSession",
    "RESPONSE", "STATUS_BAD_VALUE", "STATUS_ILLEGAL_COMMAND",
    "STATUS_INVALID_TOKEN", "STATUS_OK", "STATUS_UNKNOWN_PIN",
    "STATUS_WRONG_DIRECTION", "TOKEN_LENGTH", "TeleopFrame", "TeleopHub",
    "TeleopServer", "UnknownPin", "WrongDirection", "check_write",
    "decode_frame", "encode_frame", "hardware_body", "hardware_frame",
    "response",
]
