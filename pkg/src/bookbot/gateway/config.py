"""Scenario and seed-file loading plus the process configuration."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..botsim import Pose, Rect, World
from ..circulation import Book, Loan, Student
from ..geolocation import SceneAnchor

DEFAULT_EPOCH_MS = 1_700_000_000_000  # fixed origin for seeded runs
TOKEN_LENGTH = 32


class ScenarioError(ValueError):
    pass


@dataclass
class GatewayConfig:
    scenario_path: Path
    store_path: Path
    listen_host: str = "127.0.0.1"
    listen_port: int = 8080
    teleop_port: int = 9443
    token: str = ""
    seed: int | None = None
    assets_dir: Path | None = None
    script_path: Path | None = None
    max_ticks: int | None = None
    realtime: bool = True

    def __post_init__(self):
        if self.token and len(self.token) != TOKEN_LENGTH:
            raise ScenarioError(f"auth token must be {TOKEN_LENGTH} characters")


@dataclass
class Scenario:
    world: World
    start_pose: Pose
    anchor: SceneAnchor
    bot_id: str = "bookbot-1"
    gps_noise_sigma_m: float = 0.0
    clock_bias_m: float = 0.0
    satellite_shell_m: float = 20_000.0
    satellite_count: int = 8
    start_epoch_ms: int = DEFAULT_EPOCH_MS
    token: str = ""
    roster: dict[str, Student] = field(default_factory=dict)
    catalog: dict[str, Book] = field(default_factory=dict)
    loans: list[Loan] = field(default_factory=list)

    def satellites(self) -> list[tuple[float, float, float]]:
        """Fixed constellation on a shell above the scene."""
        sats = []
        for k in range(self.satellite_count):
            az = 2 * math.pi * k / self.satellite_count
            el = math.radians(35 + 30 * (k % 3))
            sats.append((
                self.satellite_shell_m * math.cos(el) * math.cos(az),
                self.satellite_shell_m * math.cos(el) * math.sin(az),
                self.satellite_shell_m * math.sin(el),
            ))
        return sats


def _load_toml(path: Path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ScenarioError(f"file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"{path}: {exc}") from None


def _rect(values, what: str) -> Rect:
    if len(values) != 4:
        raise ScenarioError(f"{what} needs [xmin, ymin, xmax, ymax]")
    try:
        return Rect(*[float(v) for v in values])
    except ValueError as exc:
        raise ScenarioError(f"{what}: {exc}") from None


def _time_ms(value) -> int:
    if isinstance(value, bool):
        raise ScenarioError(f"bad timestamp {value!r}")
    if isinstance(value, int):
        return value
    if hasattr(value, "timestamp"):  # TOML datetime
        return int(value.timestamp() * 1000)
    raise ScenarioError(f"bad timestamp {value!r}")


def load_roster(path: Path) -> dict[str, Student]:
    doc = _load_toml(path)
    roster = {}
    for row in doc.get("student", []):
        try:
            student = Student(row["id"], row.get("name", row["id"]), row.get("hostel", ""))
        except (KeyError, ValueError) as exc:
            raise ScenarioError(f"{path}: bad student entry {row}: {exc}") from None
        if student.student_id in roster:
            raise ScenarioError(f"{path}: duplicate student {student.student_id}")
        roster[student.student_id] = student
    return roster


def load_catalog(path: Path) -> dict[str, Book]:
    doc = _load_toml(path)
    catalog = {}
    for row in doc.get("book", []):
        try:
            book = Book(row["barcode"], row.get("title", ""), int(row["weight_grams"]))
        except (KeyError, ValueError) as exc:
            raise ScenarioError(f"{path}: bad book entry {row}: {exc}") from None
        catalog[book.barcode] = book
    return catalog


def load_loans(path: Path) -> list[Loan]:
    doc = _load_toml(path)
    loans = []
    for row in doc.get("loan", []):
        try:
            loans.append(Loan(
                loan_id=row["id"],
                student_id=row["student"],
                barcode=row["barcode"],
                issued_at_ms=_time_ms(row["issued_at"]),
                due_at_ms=_time_ms(row["due_at"]),
                status=row.get("status", "active"),
                renewal_count=int(row.get("renewal_count", 0)),
            ))
        except (KeyError, ValueError) as exc:
            raise ScenarioError(f"{path}: bad loan entry {row}: {exc}") from None
    return loans


def load_scenario(path) -> Scenario:
    path = Path(path)
    doc = _load_toml(path)
    try:
        world_doc = doc["world"]
        bounds = _rect(world_doc["bounds"], "world.bounds")
        obstacles = tuple(_rect(o, "obstacle") for o in world_doc.get("obstacles", []))
        world = World(bounds, obstacles)
    except (KeyError, ValueError) as exc:
        raise ScenarioError(f"{path}: {exc}") from None

    bot = doc.get("bot", {})
    start = bot.get("start", [0.0, 0.0, 0.0])
    if len(start) != 3:
        raise ScenarioError("bot.start needs [x, y, heading]")
    pose = Pose(float(start[0]), float(start[1]), float(start[2]))
    if not world.bounds.contains(pose.x, pose.y):
        raise ScenarioError("bot.start outside world bounds")

    gps = doc.get("gps", {})
    anchor = SceneAnchor(float(gps.get("anchor_lat", 12.9916)),
                         float(gps.get("anchor_lon", 80.2336)))

    seeds = doc.get("seeds", {})
    def seed_path(key):
        value = seeds.get(key)
        return (path.parent / value) if value else None

    roster_path = seed_path("roster")
    catalog_path = seed_path("catalog")
    loans_path = seed_path("loans")

    scenario = Scenario(
        world=world,
        start_pose=pose,
        anchor=anchor,
        bot_id=str(bot.get("id", "bookbot-1")),
        gps_noise_sigma_m=float(gps.get("noise_sigma_m", 0.0)),
        clock_bias_m=float(gps.get("clock_bias_m", 0.0)),
        satellite_shell_m=float(gps.get("satellite_shell_m", 20_000.0)),
        satellite_count=int(gps.get("satellite_count", 8)),
        start_epoch_ms=_time_ms(doc.get("time", {}).get("start_epoch", DEFAULT_EPOCH_MS)),
        token=str(doc.get("gateway", {}).get("token", "")),
        roster=load_roster(roster_path) if roster_path else {},
        catalog=load_catalog(catalog_path) if catalog_path else {},
        loans=load_loans(loans_path) if loans_path else [],
    )
    for loan in scenario.loans:
        if loan.student_id not in scenario.roster:
            raise ScenarioError(f"loan {loan.loan_id} references unknown student")
        if loan.barcode not in scenario.catalog:
            raise ScenarioError(f"loan {loan.loan_id} references unknown book")
    return scenario
