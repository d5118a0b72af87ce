"""Differential-drive bot kinematics, forward ultrasonic ranging and a
rectangular obstacle world.

The pose update is the exact constant-twist arc, so splitting a time step
into sub-steps reproduces the same pose; the ranger casts a single ray.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float  # radians, normalized to (-pi, pi]

    def __post_init__(self):
        object.__setattr__(self, "heading", normalize_angle(self.heading))


def normalize_angle(theta: float) -> float:
    wrapped = math.fmod(theta + math.pi, 2 * math.pi)
    if wrapped <= 0:
        wrapped += 2 * math.pi
    return wrapped - math.pi


@dataclass(frozen=True)
class MotorCommand:
    left_duty: float
    right_duty: float

    def __post_init__(self):
        object.__setattr__(self, "left_duty", max(-100.0, min(100.0, self.left_duty)))
        object.__setattr__(self, "right_duty", max(-100.0, min(100.0, self.right_duty)))


STOP = MotorCommand(0.0, 0.0)


class Direction(enum.Enum):
    N = "N"
    S = "S"
    E = "E"
    W = "W"
    STOP = "STOP"


_DPAD = {
    Direction.N: MotorCommand(100.0, 100.0),
    Direction.S: MotorCommand(-100.0, -100.0),
    Direction.W: MotorCommand(-60.0, 60.0),
    Direction.E: MotorCommand(60.0, -60.0),
    Direction.STOP: STOP,
}


def dpad_to_motors(direction: Direction | str) -> MotorCommand:
    """Cardinal d-pad buttons: N/S drive, E/W spin in place, STOP halts."""
    if isinstance(direction, str):
        direction = Direction(direction)
    return _DPAD[direction]


@dataclass(frozen=True)
class DriveParams:
    wheel_base_m: float = 0.20
    max_wheel_speed_mps: float = 0.5
    ultrasonic_max_range_m: float = 4.0
    speed_of_sound_mps: float = 343.0
    bot_radius_m: float = 0.15

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if value <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Rect:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if self.xmin >= self.xmax or self.ymin >= self.ymax:
            raise ValueError("degenerate rectangle")

    def contains(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax

    def inflate(self, margin: float) -> "Rect":
        return Rect(self.xmin - margin, self.ymin - margin,
                    self.xmax + margin, self.ymax + margin)


@dataclass(frozen=True)
class World:
    bounds: Rect
    obstacles: tuple[Rect, ...] = ()

    def __post_init__(self):
        for ob in self.obstacles:
            if not (self.bounds.xmin <= ob.xmin and ob.xmax <= self.bounds.xmax
                    and self.bounds.ymin <= ob.ymin and ob.ymax <= self.bounds.ymax):
                raise ValueError("obstacle outside world bounds")


def step(pose: Pose, cmd: MotorCommand, dt: float, params: DriveParams) -> Pose:
    """Advance the pose by one constant-twist arc."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    v_l = cmd.left_duty / 100.0 * params.max_wheel_speed_mps
    v_r = cmd.right_duty / 100.0 * params.max_wheel_speed_mps
    v = (v_l + v_r) / 2.0
    omega = (v_r - v_l) / params.wheel_base_m
    theta = pose.heading
    if abs(omega) < 1e-9:
        return Pose(pose.x + v * dt * math.cos(theta),
                    pose.y + v * dt * math.sin(theta),
                    theta)
    radius = v / omega
    theta_new = theta + omega * dt
    return Pose(pose.x + radius * (math.sin(theta_new) - math.sin(theta)),
                pose.y - radius * (math.cos(theta_new) - math.cos(theta)),
                theta_new)


def _ray_rect_distance(x: float, y: float, dx: float, dy: float, rect: Rect,
                       from_inside: bool = False) -> float | None:
    """Distance along the ray to the rectangle, None if it is missed.

    With from_inside the exit distance is returned (used for world bounds).
    """
    t_near = -math.inf
    t_far = math.inf
    for p, d, lo, hi in ((x, dx, rect.xmin, rect.xmax), (y, dy, rect.ymin, rect.ymax)):
        if abs(d) < 1e-15:
            if p < lo or p > hi:
                return None
            continue
        t1 = (lo - p) / d
        t2 = (hi - p) / d
        if t1 > t2:
            t1, t2 = t2, t1
        t_near = max(t_near, t1)
        t_far = min(t_far, t2)
    if t_near > t_far or t_far < 0:
        return None
    if from_inside:
        return t_far
    if t_near >= 0:
        return t_near
    # grazing starts: a pose clipped onto a boundary may sit a rounding
    # error inside it; treat a barely-negative entry as contact at 0
    return 0.0 if t_near >= -1e-9 else None


def ultrasonic_range(pose: Pose, world: World, params: DriveParams) -> float | None:
    """Range to the first surface ahead, None when beyond the sensor limit."""
    if not world.bounds.contains(pose.x, pose.y):
        raise ValueError("pose outside world bounds")
    dx, dy = math.cos(pose.heading), math.sin(pose.heading)
    best = _ray_rect_distance(pose.x, pose.y, dx, dy, world.bounds, from_inside=True)
    for ob in world.obstacles:
        hit = _ray_rect_distance(pose.x, pose.y, dx, dy, ob)
        if hit is not None and hit < best:
            best = hit
    # explicit echo-time model: d = t * c / 2 with t = 2 d / c
    echo_t = 2.0 * best / params.speed_of_sound_mps
    distance = echo_t * params.speed_of_sound_mps / 2.0
    if distance > params.ultrasonic_max_range_m:
        return None
    return distance


def collision_guard(pose: Pose, proposed: Pose, world: World,
                    params: DriveParams) -> Pose:
    """Clip the motion segment at the first contact with an inflated
    obstacle or the deflated world boundary; heading is never blocked."""
    margin = params.bot_radius_m
    inner = world.bounds.inflate(-margin)
    inflated = [ob.inflate(margin) for ob in world.obstacles]

    def in_contact(x, y):
        eps = 1e-12
        if not (inner.xmin - eps <= x <= inner.xmax + eps
                and inner.ymin - eps <= y <= inner.ymax + eps):
            return True
        return any(ob.xmin + eps < x < ob.xmax - eps
                   and ob.ymin + eps < y < ob.ymax - eps for ob in inflated)

    if in_contact(pose.x, pose.y):
        return pose

    dx = proposed.x - pose.x
    dy = proposed.y - pose.y
    if dx == 0 and dy == 0:
        return proposed

    t_stop = 1.0
    for ob in inflated:
        hit = _ray_rect_distance(pose.x, pose.y, dx, dy, ob)
        if hit is not None and hit < t_stop:
            t_stop = hit
    exit_t = _ray_rect_distance(pose.x, pose.y, dx, dy, inner, from_inside=True)
    if exit_t is not None and exit_t < t_stop:
        t_stop = exit_t

    if t_stop >= 1.0:
        return proposed
    t_stop = max(0.0, t_stop)
    return Pose(pose.x + t_stop * dx, pose.y + t_stop * dy, proposed.heading)
