"""Simulation clock loop: integrates the bot, samples sensors, publishes
telemetry and executes queued commands.

All state mutation happens on this single thread.  HTTP and teleop
handlers enqueue callables and (optionally) wait on a future; the loop
drains the queue at the start of every 50 ms tick, so no mutation can
bypass the serialized order or the event log.
"""

from __future__ import annotations

import json
import math
import queue
import random
import threading
import time
from concurrent.futures import Future
from dataclasses import dataclass
from datetime import datetime, timezone

from .. import botsim, weighscale
from ..circulation import LibraryService
from ..geolocation import emit_gga, emit_rmc, synthesize_obs, trilaterate
from ..symbology import decode_ean13, encode_ean13
from .config import Scenario
from .kiosk import KioskManager, KioskNeedsBarcode

TICK_MS = 50
TELEMETRY_EVERY_TICKS = 2   # 10 Hz
GPS_EVERY_TICKS = 20        # 1 Hz
COMMAND_WAIT_S = 5.0


class SimClock:
    """Logical clock: now = start epoch + tick * 50 ms."""

    def __init__(self, start_epoch_ms: int):
        self.start_epoch_ms = start_epoch_ms
        self.tick = 0

    @property
    def now_ms(self) -> int:
        return self.start_epoch_ms + self.tick * TICK_MS

    @property
    def now_s(self) -> float:
        return self.now_ms / 1000.0

    def advance(self) -> None:
        self.tick += 1


@dataclass
class TelemetrySnapshot:
    tick: int
    x: float
    y: float
    heading: float
    lat: float
    lon: float
    distance_cm: int | None
    weight_g: int
    inventory_count: int
    warn_state: bool
    docked: bool

    def to_json(self) -> str:
        doc = {
            "tick": self.tick,
            "pose": {"x": round(self.x, 6), "y": round(self.y, 6),
                     "heading": round(self.heading, 6)},
            "lat": round(self.lat, 8),
            "lon": round(self.lon, 8),
            "distance_cm": self.distance_cm,
            "weight_g": self.weight_g,
            "inventory_count": self.inventory_count,
            "warn_state": self.warn_state,
            "docked": self.docked,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


class Simulation:
    def __init__(self, scenario: Scenario, service: LibraryService,
                 seed: int | None = None, hub=None,
                 telemetry_stream=None, nmea_stream=None,
                 script=None, max_ticks: int | None = None,
                 realtime: bool = True):
        self.scenario = scenario
        self.service = service
        self.hub = hub
        self.telemetry_stream = telemetry_stream
        self.nmea_stream = nmea_stream
        self.script = script or {}
        self.max_ticks = max_ticks
        self.realtime = realtime

        self.clock = SimClock(scenario.start_epoch_ms)
        self.params = botsim.DriveParams()
        self.world = scenario.world
        self.pose = scenario.start_pose
        self.motor_cmd = botsim.STOP
        self.docked = False
        self.kiosks = KioskManager()
        self.calibration = weighscale.Calibration()
        self._rng = random.Random(seed) if seed is not None else None
        self._gps_rng_seed = seed
        self._sats = scenario.satellites()
        self.lat, self.lon = scenario.anchor.to_latlon(self.pose.x, self.pose.y)
        self.distance_m: float | None = None
        self.last_snapshot: TelemetrySnapshot | None = None

        self._commands: queue.Queue = queue.Queue()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self.script_kiosk_id: str | None = None
        self.error: Exception | None = None

    # -- cross-thread entry points --

    def call(self, fn):
        """Run fn on the loop thread and wait for its result."""
        future: Future = Future()
        self._commands.put((fn, future))
        return future.result(timeout=COMMAND_WAIT_S)

    def post(self, fn) -> None:
        """Queue fn for the next tick without waiting."""
        self._commands.put((fn, None))

    def drive(self, direction: str) -> None:
        cmd = botsim.dpad_to_motors(direction)
        self.post(lambda sim: sim._set_motors(cmd))

    def stop_motors(self) -> None:
        self.post(lambda sim: sim._set_motors(botsim.STOP))

    # -- loop-thread operations --

    def _set_motors(self, cmd: botsim.MotorCommand) -> None:
        self.motor_cmd = cmd

    def kiosk_open(self, token_text: str) -> dict:
        student = self.service.verify_student(token_text, self.clock.now_ms)
        session = self.kiosks.open(student, token_text, self.clock.now_ms)
        return {"kiosk_session": session.session_id,
                "student": {"id": student.student_id, "name": student.display_name,
                            "hostel": student.hostel},
                "loans": self._loan_docs(student.student_id)}

    def kiosk_barcode(self, session_id: str, digits: str) -> dict:
        session = self.kiosks.get(session_id, self.clock.now_ms)
        # barcode must name a catalog book; mismatch against the loan is
        # only detectable at submit time
        scan = decode_ean13(encode_ean13(digits))
        session.barcode = scan.text()
        return {"kiosk_session": session.session_id, "barcode": session.barcode}

    def kiosk_action(self, session_id: str, loan_id: str, action: str) -> dict:
        session = self.kiosks.get(session_id, self.clock.now_ms)
        now_ms = self.clock.now_ms
        if action == "renew":
            loan, doc = self.service.renew(loan_id, now_ms, session.qr_text)
            return {"action": "renew", "loan": self._loan_doc(loan, now_ms),
                    "event": doc}
        if action == "submit":
            if session.barcode is None:
                raise KioskNeedsBarcode("scan the book barcode before submitting")
            delta = self._measure_delta(loan_id)
            doc = self.service.submit(loan_id, session.barcode, delta,
                                      now_ms, session.qr_text)
            session.barcode = None
            return {"action": "submit", "event": doc,
                    "inventory_weight_g": self.service.inventory_weight_g}
        raise ValueError(f"unknown action {action!r}")

    def set_docked(self, docked: bool) -> dict:
        self.docked = docked
        return {"docked": self.docked}

    def unload(self) -> dict:
        batch = self.service.unload(self.clock.now_ms, self.docked)
        return {"unloaded": len(batch),
                "inventory_weight_g": self.service.inventory_weight_g}

    def inventory(self) -> dict:
        return {
            "books": [{"barcode": b.barcode, "title": b.title,
                       "weight_grams": b.weight_grams}
                      for b in self.service.held_books()],
            "weight_g": self.service.inventory_weight_g,
            "warn_state": self.service.policy.warn_state,
            "docked": self.docked,
        }

    def _measure_delta(self, loan_id: str) -> float:
        """Weigh the bin before/after the drop via the simulated bridge."""
        loan = self.service.loans.get(loan_id)
        book_g = self.service.catalog[loan.barcode].weight_grams if loan else 0
        current = self.service.inventory_weight_g
        before = weighscale.raw_to_grams(
            weighscale.simulate_bridge(current, self.calibration, rng=self._rng),
            self.calibration)
        after = weighscale.raw_to_grams(
            weighscale.simulate_bridge(current + book_g, self.calibration, rng=self._rng),
            self.calibration)
        return after - before

    def _loan_doc(self, loan, now_ms: int) -> dict:
        return {
            "loan_id": loan.loan_id,
            "barcode": loan.barcode,
            "title": self.service.catalog[loan.barcode].title,
            "issued_at": _rfc3339(loan.issued_at_ms),
            "due_at": _rfc3339(loan.due_at_ms),
            "status": loan.status,
            "renewal_count": loan.renewal_count,
            "overdue": loan.overdue(now_ms),
        }

    def _loan_docs(self, student_id: str) -> list[dict]:
        now_ms = self.clock.now_ms
        return [self._loan_doc(v.loan, now_ms)
                for v in self.service.list_loans(student_id, now_ms)]

    # -- the tick --

    def tick_once(self) -> None:
        self._drain_commands()
        self._run_script_line()

        proposed = botsim.step(self.pose, self.motor_cmd, TICK_MS / 1000.0, self.params)
        self.pose = botsim.collision_guard(self.pose, proposed, self.world, self.params)
        self.distance_m = botsim.ultrasonic_range(self.pose, self.world, self.params)

        if self.clock.tick % GPS_EVERY_TICKS == 0:
            self._gps_fix()
        if self.clock.tick % TELEMETRY_EVERY_TICKS == 0:
            self._publish_telemetry()
        if self.hub is not None:
            self.hub.sweep(self.clock.now_s)
        self.kiosks.prune(self.clock.now_ms)
        self.clock.advance()

    def _drain_commands(self) -> None:
        while True:
            try:
                fn, future = self._commands.get_nowait()
            except queue.Empty:
                return
            try:
                result = fn(self)
                if future is not None:
                    future.set_result(result)
            except Exception as exc:
                if future is not None:
                    future.set_exception(exc)

    def _run_script_line(self) -> None:
        for fn in self.script.get(self.clock.tick, []):
            try:
                fn(self)
            except Exception as exc:
                raise RuntimeError(f"script command at tick {self.clock.tick} failed: {exc}") from exc

    def _gps_fix(self) -> None:
        truth = (self.pose.x, self.pose.y, 0.0)
        seed = None
        if self._gps_rng_seed is not None:
            seed = self._gps_rng_seed + self.clock.tick
        obs = synthesize_obs(truth, self.scenario.clock_bias_m, self._sats,
                             self.scenario.gps_noise_sigma_m, seed=seed)
        fix = trilaterate(obs, solve_bias=True)
        self.lat, self.lon = self.scenario.anchor.to_latlon(fix.position[0], fix.position[1])
        utc = self.clock.now_ms / 1000.0
        speed = abs(self.motor_cmd.left_duty + self.motor_cmd.right_duty) / 200.0 \
            * self.params.max_wheel_speed_mps
        course = (90.0 - math.degrees(self.pose.heading)) % 360.0
        gga = emit_gga(self.lat, self.lon, utc, len(obs))
        rmc = emit_rmc(self.lat, self.lon, utc, speed, course)
        if self.nmea_stream is not None:
            self.nmea_stream.publish(gga)
            self.nmea_stream.publish(rmc)
        if self.hub is not None:
            self.hub.publish_pin("V2", f"{self.lat:.6f},{self.lon:.6f}")

    def _publish_telemetry(self) -> None:
        sample = weighscale.simulate_bridge(self.service.inventory_weight_g,
                                            self.calibration, rng=self._rng)
        weight_g = round(weighscale.raw_to_grams(sample, self.calibration))
        distance_cm = None if self.distance_m is None else round(self.distance_m * 100)
        snapshot = TelemetrySnapshot(
            tick=self.clock.tick,
            x=self.pose.x, y=self.pose.y, heading=self.pose.heading,
            lat=self.lat, lon=self.lon,
            distance_cm=distance_cm,
            weight_g=weight_g,
            inventory_count=len(self.service.held_barcodes),
            warn_state=self.service.policy.warn_state,
            docked=self.docked,
        )
        self.last_snapshot = snapshot
        if self.telemetry_stream is not None:
            self.telemetry_stream.publish(snapshot.to_json())
        if self.hub is not None:
            self.hub.publish_pin("V1", str(distance_cm if distance_cm is not None else -1))
            self.hub.publish_pin("V3", str(weight_g))
            self.hub.publish_pin("V4", str(len(self.service.held_barcodes)))

    # -- thread management --

    def run(self) -> None:
        next_deadline = time.monotonic()
        try:
            while not self._stop.is_set():
                if self.max_ticks is not None and self.clock.tick >= self.max_ticks:
                    break
                self.tick_once()
                if self.realtime:
                    next_deadline += TICK_MS / 1000.0
                    delay = next_deadline - time.monotonic()
                    if delay > 0:
                        time.sleep(delay)
                    else:
                        next_deadline = time.monotonic()
        except Exception as exc:  # surfaced by Gateway.wait()
            self.error = exc
        self._drain_commands()  # serve stragglers before shutdown

    def start(self) -> None:
        self._thread = threading.Thread(target=self.run, daemon=True, name="simloop")
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5.0)

    def join(self, timeout: float | None = None) -> None:
        if self._thread is not None:
            self._thread.join(timeout)

    @property
    def finished(self) -> bool:
        return self._thread is not None and not self._thread.is_alive()


def _rfc3339(ms: int) -> str:
    stamp = datetime.fromtimestamp(ms / 1000.0, tz=timezone.utc)
    return stamp.isoformat(timespec="milliseconds").replace("+00:00", "Z")
