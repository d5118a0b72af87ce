"""Teleop hub and TCP listener.

The hub routes pin traffic: app writes to V0 reach the drive callback
and any connected device sessions; device writes to V1-V4 fan out to all
app sessions, as do pin values published by the in-process bot.  Each
connection owns a bounded outbound queue drained by a writer thread, so
a slow peer loses old telemetry instead of stalling anyone else.
"""

from __future__ import annotations

import collections
import socket
import socketserver
import threading
import time

from . import framing
from .session import ProtocolSession

OUTBOUND_QUEUE_LIMIT = 256


class TeleopHub:
    def __init__(self, secret: str, on_drive=None, on_device_drop=None,
                 clock=time.monotonic):
        self.secret = secret
        self.clock = clock
        self.on_drive = on_drive
        self.on_device_drop = on_device_drop
        self._lock = threading.Lock()
        self._peers: dict[ProtocolSession, tuple[object, object]] = {}

    def new_session(self, sender, closer=None) -> ProtocolSession:
        session = ProtocolSession(self.secret, self, now=self.clock())
        with self._lock:
            self._peers[session] = (sender, closer)
        return session

    def detach(self, session: ProtocolSession) -> None:
        session.close()

    # -- router interface used by ProtocolSession --

    def session_authenticated(self, session: ProtocolSession) -> None:
        pass

    def session_closed(self, session: ProtocolSession) -> None:
        with self._lock:
            entry = self._peers.pop(session, None)
        if session.role == "device" and self.on_device_drop is not None:
            self.on_device_drop()
        if entry is not None and entry[1] is not None:
            entry[1]()

    def pin_write(self, session: ProtocolSession, pin: str, value: str) -> None:
        if session.role == "app":
            if self.on_drive is not None:
                self.on_drive(value)
            self._fanout(pin, value, to_role="device", skip=session)
        else:
            self._fanout(pin, value, to_role="app", skip=session)

    # -- bot-side publishing and housekeeping --

    def publish_pin(self, pin: str, value: str) -> None:
        """Unsolicited device-side push (msg_id 0) to every app session."""
        self._fanout(pin, value, to_role="app")

    def _fanout(self, pin: str, value: str, to_role: str, skip=None) -> None:
        frame = framing.hardware_frame(0, pin, value)
        with self._lock:
            targets = [tx for s, (tx, _) in self._peers.items()
                       if s is not skip and s.authenticated and s.role == to_role]
        for tx in targets:
            tx(frame)

    def sweep(self, now: float | None = None) -> list[ProtocolSession]:
        """Close sessions silent past the heartbeat timeout."""
        now = self.clock() if now is None else now
        with self._lock:
            stale = [s for s in self._peers if s.expired(now)]
        for session in stale:
            session.close()
        return stale

    def sessions(self) -> list[ProtocolSession]:
        with self._lock:
            return list(self._peers)


class _Connection:
    """Socket plus a drop-oldest outbound queue and its writer thread."""

    def __init__(self, sock: socket.socket):
        self._sock = sock
        self._queue: collections.deque[bytes] = collections.deque(maxlen=OUTBOUND_QUEUE_LIMIT)
        self._ready = threading.Event()
        self._done = False
        self._writer = threading.Thread(target=self._drain, daemon=True)
        self._writer.start()

    def send(self, payload: bytes) -> None:
        if not self._done:
            self._queue.append(payload)
            self._ready.set()

    def _drain(self) -> None:
        while True:
            self._ready.wait(timeout=0.5)
            self._ready.clear()
            while self._queue:
                try:
                    self._sock.sendall(self._queue.popleft())
                except OSError:
                    self._done = True
                    return
            if self._done:
                return

    def stop(self) -> None:
        """Flush pending frames, then let the writer exit."""
        self._done = True
        self._ready.set()
        self._writer.join(timeout=1.0)


class _Handler(socketserver.BaseRequestHandler):
    def handle(self):
        hub: TeleopHub = self.server.hub
        conn = _Connection(self.request)

        def closer():
            # read side only: unblocks recv while queued replies still flush
            try:
                self.request.shutdown(socket.SHUT_RD)
            except OSError:
                pass

        session = hub.new_session(conn.send, closer)
        try:
            while not session.closed:
                try:
                    data = self.request.recv(4096)
                except OSError:
                    break
                if not data:
                    break
                for frame in session.feed(data, now=hub.clock()):
                    conn.send(frame)
        finally:
            hub.detach(session)
            conn.stop()


class _Server(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


class TeleopServer:
    """TCP listener front-end; port 0 picks an ephemeral port."""

    def __init__(self, host: str, port: int, hub: TeleopHub):
        self._server = _Server((host, port), _Handler)
        self._server.hub = hub
        self._thread = threading.Thread(target=self._server.serve_forever,
                                        kwargs={"poll_interval": 0.05}, daemon=True)

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    def start(self) -> None:
        self._thread.start()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
