"""HTTP front-end: JSON endpoints, SSE telemetry, NMEA stream and the
static console assets.

Handlers never touch simulation state directly; every mutating request
is a callable executed on the loop thread via Simulation.call().
"""

from __future__ import annotations

import base64
import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from ..circulation import (
    BadMac,
    BarcodeMismatch,
    LoanNotActive,
    MalformedToken,
    NotDocked,
    PayloadFull,
    TokenExpired,
    UnknownLoan,
    UnknownStudent,
)
from ..symbology import (
    BadCheckDigit,
    ChecksumMismatch,
    InvalidDigitCount,
    NoSymbolFound,
    UnsupportedMode,
    UnsupportedVersion,
    FormatInfoUnreadable,
    decode_qr,
)
from ..symbology.ean13 import decode_ean13
from ..symbology.pnm import PnmFormatError, decode_pbm, decode_pgm
from .kiosk import KioskNeedsBarcode, KioskSessionUnknown

log = logging.getLogger(__name__)

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


def error_status(exc: Exception) -> int:
    if isinstance(exc, (BadMac, TokenExpired)):
        return 401
    if isinstance(exc, (UnknownStudent, UnknownLoan, KioskSessionUnknown)):
        return 404
    if isinstance(exc, (PayloadFull, BarcodeMismatch, NotDocked,
                        LoanNotActive, KioskNeedsBarcode)):
        return 409
    if isinstance(exc, (MalformedToken, InvalidDigitCount, BadCheckDigit,
                        NoSymbolFound, ChecksumMismatch, UnsupportedMode,
                        UnsupportedVersion, FormatInfoUnreadable,
                        PnmFormatError, ValueError, KeyError)):
        return 400
    return 500


class GatewayHttpServer:
    def __init__(self, host: str, port: int, sim, telemetry_stream, nmea_stream,
                 assets_dir: Path | None = None):
        handler = _build_handler(sim, telemetry_stream, nmea_stream, assets_dir)
        self._server = ThreadingHTTPServer((host, port), handler)
        self._server.daemon_threads = True
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


def _build_handler(sim, telemetry_stream, nmea_stream, assets_dir):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):
            log.debug("http: " + fmt, *args)

        # -- plumbing --

        def _json(self, status: int, doc: dict) -> None:
            body = json.dumps(doc, sort_keys=True).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _error(self, exc: Exception) -> None:
            status = error_status(exc)
            if status == 500:
                log.exception("internal error: %s", exc)
            self._json(status, {"error": type(exc).__name__, "detail": str(exc)})

        def _read_body(self) -> bytes:
            length = int(self.headers.get("Content-Length") or 0)
            return self.rfile.read(length) if length else b""

        def _body_json(self) -> dict:
            raw = self._read_body()
            if not raw:
                return {}
            try:
                doc = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValueError(f"request body is not JSON: {exc}") from None
            if not isinstance(doc, dict):
                raise ValueError("request body must be a JSON object")
            return doc

        # -- routes --

        def do_GET(self):
            url = urlparse(self.path)
            try:
                if url.path == "/api/telemetry":
                    self._stream(telemetry_stream, "text/event-stream", sse=True)
                elif url.path == "/api/nmea":
                    self._stream(nmea_stream, "text/plain; charset=ascii", sse=False)
                elif url.path == "/api/inventory":
                    self._json(200, sim.call(lambda s: s.inventory()))
                elif url.path == "/api/snapshot":
                    snap = sim.last_snapshot
                    if snap is None:
                        self._json(503, {"error": "no telemetry yet"})
                    else:
                        self._json(200, json.loads(snap.to_json()))
                else:
                    self._static(url.path)
            except (BrokenPipeError, ConnectionResetError):
                pass
            except Exception as exc:
                self._error(exc)

        def do_POST(self):
            url = urlparse(self.path)
            query = parse_qs(url.query)
            try:
                route = {
                    "/api/drive": self._post_drive,
                    "/api/kiosk/qr": self._post_kiosk_qr,
                    "/api/kiosk/barcode": self._post_kiosk_barcode,
                    "/api/kiosk/action": self._post_kiosk_action,
                    "/api/dock": self._post_dock,
                    "/api/unload": self._post_unload,
                }.get(url.path)
                if route is None:
                    self._json(404, {"error": "NotFound", "detail": url.path})
                    return
                route(query)
            except (BrokenPipeError, ConnectionResetError):
                pass
            except Exception as exc:
                self._error(exc)

        def _post_drive(self, query):
            doc = self._body_json()
            direction = doc.get("direction")
            if direction not in ("N", "S", "E", "W", "STOP"):
                raise ValueError(f"direction must be N/S/E/W/STOP, got {direction!r}")
            sim.drive(direction)
            self._json(200, {"ok": True, "direction": direction})

        def _post_kiosk_qr(self, query):
            token = self._extract_qr_payload(query)
            self._json(200, sim.call(lambda s: s.kiosk_open(token)))

        def _extract_qr_payload(self, query) -> str:
            ctype = (self.headers.get("Content-Type") or "").split(";")[0].strip()
            if ctype == "application/json":
                doc = self._body_json()
                if "token" in doc:
                    return str(doc["token"])
                if "pbm_base64" in doc:
                    bits = _pbm_bits(base64.b64decode(doc["pbm_base64"]))
                    return decode_qr(bits).text()
                raise ValueError("expected 'token' or 'pbm_base64'")
            # raw PBM upload
            bits = _pbm_bits(self._read_body())
            return decode_qr(bits).text()

        def _post_kiosk_barcode(self, query):
            ctype = (self.headers.get("Content-Type") or "").split(";")[0].strip()
            session_id = None
            if ctype == "application/json":
                doc = self._body_json()
                session_id = doc.get("kiosk_session")
                if "digits" in doc:
                    digits = str(doc["digits"])
                elif "pgm_base64" in doc:
                    digits = _scanline_digits(base64.b64decode(doc["pgm_base64"]))
                else:
                    raise ValueError("expected 'digits' or 'pgm_base64'")
            else:
                session_id = (query.get("session") or [None])[0]
                digits = _scanline_digits(self._read_body())
            if not session_id:
                raise ValueError("kiosk_session required")
            self._json(200, sim.call(lambda s: s.kiosk_barcode(session_id, digits)))

        def _post_kiosk_action(self, query):
            doc = self._body_json()
            session_id = doc.get("kiosk_session")
            loan_id = doc.get("loan_id")
            action = doc.get("action")
            if not session_id or not loan_id or action not in ("submit", "renew"):
                raise ValueError("need kiosk_session, loan_id and action submit|renew")
            self._json(200, sim.call(lambda s: s.kiosk_action(session_id, loan_id, action)))

        def _post_dock(self, query):
            doc = self._body_json()
            docked = bool(doc.get("docked", True))
            self._json(200, sim.call(lambda s: s.set_docked(docked)))

        def _post_unload(self, query):
            self._json(200, sim.call(lambda s: s.unload()))

        # -- streaming --

        def _stream(self, broadcaster, content_type: str, sse: bool) -> None:
            sub = broadcaster.subscribe()
            try:
                self.send_response(200)
                self.send_header("Content-Type", content_type)
                self.send_header("Cache-Control", "no-store")
                self.send_header("Access-Control-Allow-Origin", "*")
                self.send_header("Connection", "close")
                self.end_headers()
                while True:
                    item = sub.get(timeout=0.5)
                    if item is None:
                        continue
                    if sse:
                        payload = f"data: {item.strip()}\n\n"
                    else:
                        payload = item if item.endswith("\n") else item + "\n"
                    self.wfile.write(payload.encode("utf-8"))
                    self.wfile.flush()
            except (BrokenPipeError, ConnectionResetError, OSError):
                pass
            finally:
                broadcaster.unsubscribe(sub)

        # -- static console assets --

        def _static(self, path: str) -> None:
            if assets_dir is None:
                self._json(404, {"error": "NotFound", "detail": path})
                return
            if path in ("/", "/operate", "/kiosk"):
                path = "/index.html"
            target = (assets_dir / path.lstrip("/")).resolve()
            if not str(target).startswith(str(assets_dir.resolve())) or not target.is_file():
                self._json(404, {"error": "NotFound", "detail": path})
                return
            body = target.read_bytes()
            self.send_response(200)
            ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return Handler


def _pbm_bits(raw: bytes):
    return decode_pbm(raw)


def _scanline_digits(raw: bytes) -> str:
    grid = decode_pgm(raw)
    return decode_ean13(bytes(grid[grid.shape[0] // 2])).text()
