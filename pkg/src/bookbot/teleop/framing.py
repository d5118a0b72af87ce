"""Wire framing for the teleoperation link.

Frame layout: 1-byte command, 2-byte message id, 2-byte body length,
then the body; all integers big-endian.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

HEADER = struct.Struct(">BHH")

# command bytes
RESPONSE = 0x00
LOGIN = 0x02
PING = 0x06
HARDWARE = 0x14

COMMAND_NAMES = {RESPONSE: "RESPONSE", LOGIN: "LOGIN", PING: "PING", HARDWARE: "HARDWARE"}

# RESPONSE status codes (single body byte)
STATUS_OK = 0
STATUS_INVALID_TOKEN = 1
STATUS_ILLEGAL_COMMAND = 2
STATUS_UNKNOWN_PIN = 3
STATUS_WRONG_DIRECTION = 4
STATUS_BAD_VALUE = 5


class NeedMoreBytes(Exception):
    """Buffer holds only part of a frame; read more and retry."""

class OversizeBody(ValueError):
    pass


@dataclass(frozen=True)
class TeleopFrame:
    command: int
    msg_id: int
    body: bytes = b""


def encode_frame(command: int, msg_id: int, body: bytes = b"") -> bytes:
    if not 0 <= command <= 0xFF:
        raise ValueError("command must fit one byte")
    if not 0 <= msg_id <= 0xFFFF:
        raise ValueError("msg_id must fit two bytes")
    if len(body) > 0xFFFF:
        raise OversizeBody(f"body of {len(body)} bytes exceeds 65535")
    return HEADER.pack(command, msg_id, len(body)) + body


def decode_frame(buffer: bytes) -> tuple[TeleopFrame, int]:
    """Decode exactly one frame from the start of buffer.

    Returns the frame plus the number of bytes consumed; raises
    NeedMoreBytes when the buffer ends mid-frame.  Total over arbitrary
    input: any complete header + body is structurally a frame.
    """
    if len(buffer) < HEADER.size:
        raise NeedMoreBytes(f"have {len(buffer)} of {HEADER.size} header bytes")
    command, msg_id, body_len = HEADER.unpack_from(buffer)
    end = HEADER.size + body_len
    if len(buffer) < end:
        raise NeedMoreBytes(f"have {len(buffer)} of {end} frame bytes")
    return TeleopFrame(command, msg_id, bytes(buffer[HEADER.size:end])), end


def response(msg_id: int, status: int) -> bytes:
    return encode_frame(RESPONSE, msg_id, bytes([status]))


def hardware_body(pin: str, value: str) -> bytes:
    return b"\x00".join((b"vw", pin.encode("ascii"), value.encode("ascii")))


def hardware_frame(msg_id: int, pin: str, value: str) -> bytes:
    return encode_frame(HARDWARE, msg_id, hardware_body(pin, value))
