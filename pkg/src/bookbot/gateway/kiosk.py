"""Short-lived kiosk sessions binding a verified student to follow-up
barcode scans and submit/renew actions."""

from __future__ import annotations

from dataclasses import dataclass

from ..circulation import Student

SESSION_TTL_MS = 120_000


class KioskSessionUnknown(KeyError):
    pass

class KioskNeedsBarcode(ValueError):
    """Submit requested before a barcode scan in this session."""


@dataclass
class KioskSession:
    session_id: str
    student: Student
    qr_text: str
    expires_at_ms: int
    barcode: str | None = None


class KioskManager:
    def __init__(self):
        self._sessions: dict[str, KioskSession] = {}
        self._counter = 0

    def open(self, student: Student, qr_text: str, now_ms: int) -> KioskSession:
        self._counter += 1
        session = KioskSession(f"k{self._counter}", student, qr_text,
                               now_ms + SESSION_TTL_MS)
        self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str, now_ms: int) -> KioskSession:
        session = self._sessions.get(session_id)
        if session is None or now_ms >= session.expires_at_ms:
            self._sessions.pop(session_id, None)
            raise KioskSessionUnknown(session_id)
        return session

    def prune(self, now_ms: int) -> None:
        dead = [k for k, s in self._sessions.items() if now_ms >= s.expires_at_ms]
        for k in dead:
            del self._sessions[k]
