"""Per-connection protocol state machine.

The session is transport-free: bytes go in through feed(), outbound
frames come back, effects (pin writes, auth, close) surface through the
attached router.  No HARDWARE frame has any effect before a successful
LOGIN.
"""

from __future__ import annotations

import hmac
from dataclasses import dataclass

from . import framing, pins

TOKEN_LENGTH = 32
HEARTBEAT_TIMEOUT_S = 10.0

_VALID_ROLES = ("app", "device")


@dataclass
class SessionState:
    authenticated: bool = False
    peer_role: str | None = None
    last_activity: float = 0.0
    closed: bool = False


class ProtocolSession:
    """Drives one peer: authentication, heartbeat bookkeeping, pin writes."""

    def __init__(self, secret: str, router, now: float = 0.0):
        if len(secret) != TOKEN_LENGTH:
            raise ValueError(f"auth token must be {TOKEN_LENGTH} characters")
        self._secret = secret.encode("ascii")
        self._router = router
        self._buffer = bytearray()
        self.state = SessionState(last_activity=now)

    @property
    def closed(self) -> bool:
        return self.state.closed

    @property
    def authenticated(self) -> bool:
        return self.state.authenticated

    @property
    def role(self) -> str | None:
        return self.state.peer_role

    def feed(self, data: bytes, now: float = 0.0) -> list[bytes]:
        """Consume raw bytes; return the frames to send back."""
        out: list[bytes] = []
        if self.state.closed:
            return out
        self._buffer.extend(data)
        while not self.state.closed:
            try:
                frame, used = framing.decode_frame(self._buffer)
            except framing.NeedMoreBytes:
                break
            del self._buffer[:used]
            self.state.last_activity = now
            out.extend(self._handle(frame))
        return out

    def _handle(self, frame: framing.TeleopFrame) -> list[bytes]:
        if frame.command == framing.RESPONSE:
            return []  # peer acknowledging one of our pushes
        if frame.msg_id == 0:
            # requests must carry a nonzero id; echo the malformed id back
            out = [framing.response(0, framing.STATUS_ILLEGAL_COMMAND)]
            if not self.state.authenticated:
                self._close()
            return out
        if not self.state.authenticated:
            if frame.command != framing.LOGIN:
                self._close()
                return [framing.response(frame.msg_id, framing.STATUS_ILLEGAL_COMMAND)]
            return self._login(frame)
        if frame.command == framing.PING:
            return [framing.response(frame.msg_id, framing.STATUS_OK)]
        if frame.command == framing.HARDWARE:
            return [framing.response(frame.msg_id, self._hardware(frame))]
        if frame.command == framing.LOGIN:
            return [framing.response(frame.msg_id, framing.STATUS_OK)]  # idempotent re-auth
        return [framing.response(frame.msg_id, framing.STATUS_ILLEGAL_COMMAND)]

    def _login(self, frame: framing.TeleopFrame) -> list[bytes]:
        token, _, role_bytes = frame.body.partition(b"\x00")
        role = role_bytes.decode("ascii", "replace") if role_bytes else "app"
        if role not in _VALID_ROLES or not hmac.compare_digest(token, self._secret):
            return [framing.response(frame.msg_id, framing.STATUS_INVALID_TOKEN)]
        self.state.authenticated = True
        self.state.peer_role = role
        self._router.session_authenticated(self)
        return [framing.response(frame.msg_id, framing.STATUS_OK)]

    def _hardware(self, frame: framing.TeleopFrame) -> int:
        parts = frame.body.split(b"\x00")
        if len(parts) != 3 or parts[0] != b"vw":
            return framing.STATUS_BAD_VALUE
        try:
            pin = parts[1].decode("ascii")
            value = parts[2].decode("ascii")
        except UnicodeDecodeError:
            return framing.STATUS_BAD_VALUE
        try:
            pins.check_write(pin, value, self.state.peer_role)
        except pins.UnknownPin:
            return framing.STATUS_UNKNOWN_PIN
        except pins.WrongDirection:
            return framing.STATUS_WRONG_DIRECTION
        except pins.BadValueGrammar:
            return framing.STATUS_BAD_VALUE
        self._router.pin_write(self, pin, value)
        return framing.STATUS_OK

    def expired(self, now: float) -> bool:
        return now - self.state.last_activity > HEARTBEAT_TIMEOUT_S

    def _close(self) -> None:
        if not self.state.closed:
            self.state.closed = True
            self._router.session_closed(self)

    def close(self) -> None:
        self._close()
