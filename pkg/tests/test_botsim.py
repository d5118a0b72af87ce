import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bookbot.botsim import (
    STOP,
    Direction,
    DriveParams,
    MotorCommand,
    Pose,
    Rect,
    World,
    collision_guard,
    dpad_to_motors,
    normalize_angle,
    step,
    ultrasonic_range,
)

PARAMS = DriveParams()


def dist_to_rect(x, y, rect):
    dx = max(rect.xmin - x, 0.0, x - rect.xmax)
    dy = max(rect.ymin - y, 0.0, y - rect.ymax)
    return math.hypot(dx, dy)


class TestDpad:
    def test_stop(self):
        assert dpad_to_motors("STOP") == MotorCommand(0, 0)

    def test_forward_symmetric(self):
        assert dpad_to_motors(Direction.N) == MotorCommand(100, 100)
        assert dpad_to_motors("S") == MotorCommand(-100, -100)

    def test_spin_mix(self):
        assert dpad_to_motors("E") == MotorCommand(60, -60)
        assert dpad_to_motors("W") == MotorCommand(-60, 60)

    def test_east_then_west_restores_heading(self):
        pose = Pose(0, 0, 0.3)
        dt = 0.7
        spun = step(pose, dpad_to_motors("E"), dt, PARAMS)
        back = step(spun, dpad_to_motors("W"), dt, PARAMS)
        assert abs(normalize_angle(back.heading - pose.heading)) < 1e-9

    def test_unknown_direction(self):
        with pytest.raises(ValueError):
            dpad_to_motors("UP")


class TestStep:
    def test_forward_one_second(self):
        out = step(Pose(0, 0, 0), dpad_to_motors("N"), 1.0, PARAMS)
        assert out.x == pytest.approx(0.5, abs=1e-12)
        assert out.y == pytest.approx(0.0, abs=1e-12)

    def test_stop_holds_pose(self):
        pose = Pose(1.2, -0.4, 2.2)
        assert step(pose, STOP, 5.0, PARAMS) == pose

    def test_pure_spin_quarter_turn(self):
        # (-60, +60): omega = 0.6 / 0.2 = 3 rad/s; pick dt for pi/2
        dt = (math.pi / 2) / 3.0
        out = step(Pose(0, 0, 0), dpad_to_motors("W"), dt, PARAMS)
        assert out.heading == pytest.approx(math.pi / 2, abs=1e-12)
        assert abs(out.x) < 1e-12 and abs(out.y) < 1e-12

    def test_dt_must_be_positive(self):
        with pytest.raises(ValueError):
            step(Pose(0, 0, 0), STOP, 0.0, PARAMS)

    @given(st.floats(-100, 100), st.floats(-100, 100),
           st.floats(-3, 3), st.integers(min_value=2, max_value=16))
    @settings(max_examples=150)
    def test_substep_consistency(self, left, right, heading, pieces):
        cmd = MotorCommand(left, right)
        start = Pose(0.5, -0.25, heading)
        total = 0.8
        whole = step(start, cmd, total, PARAMS)
        part = start
        for _ in range(pieces):
            part = step(part, cmd, total / pieces, PARAMS)
        assert whole.x == pytest.approx(part.x, abs=1e-9)
        assert whole.y == pytest.approx(part.y, abs=1e-9)
        assert abs(normalize_angle(whole.heading - part.heading)) < 1e-9

    @given(st.floats(min_value=-50, max_value=50))
    def test_heading_always_normalized(self, theta):
        pose = Pose(0, 0, theta)
        assert -math.pi < pose.heading <= math.pi
        after = step(pose, MotorCommand(-60, 60), 3.0, PARAMS)
        assert -math.pi < after.heading <= math.pi


WORLD = World(Rect(-5, -5, 5, 5), (Rect(1.0, -1.0, 1.5, 1.0),))


class TestUltrasonic:
    def test_wall_one_meter_ahead(self):
        assert ultrasonic_range(Pose(0, 0, 0), WORLD, PARAMS) == pytest.approx(1.0)

    def test_open_space_out_of_range(self):
        world = World(Rect(-10, -10, 10, 10))
        assert ultrasonic_range(Pose(0, 0, 0), world, PARAMS) is None

    def test_wall_behind_ignored(self):
        assert ultrasonic_range(Pose(3, 0, 0), World(Rect(-5, -5, 9, 5), WORLD.obstacles),
                                PARAMS) is None

    def test_bounds_wall_in_range(self):
        assert ultrasonic_range(Pose(2, 0, 0), World(Rect(-5, -5, 5, 5)), PARAMS) == pytest.approx(3.0)

    def test_never_negative_nor_beyond_max(self):
        rng = random.Random(9)
        for _ in range(300):
            pose = Pose(rng.uniform(-4.9, 0.9), rng.uniform(-4.9, 4.9),
                        rng.uniform(-math.pi, math.pi))
            d = ultrasonic_range(pose, WORLD, PARAMS)
            assert d is None or 0 <= d <= PARAMS.ultrasonic_max_range_m

    def test_outside_world_rejected(self):
        with pytest.raises(ValueError):
            ultrasonic_range(Pose(50, 0, 0), WORLD, PARAMS)


class TestCollisionGuard:
    def test_free_path_accepted(self):
        prop = Pose(-1.0, 0, 0)
        assert collision_guard(Pose(-2, 0, 0), prop, WORLD, PARAMS) == prop

    def test_clamped_at_contact(self):
        # inflated obstacle face sits at x = 0.85
        start = Pose(0.75, 0, 0)
        clipped = collision_guard(start, Pose(1.25, 0, 0), WORLD, PARAMS)
        assert clipped.x == pytest.approx(0.85, abs=1e-9)

    def test_already_in_contact_stays(self):
        contact = Pose(0.85, 0, 0)
        pushed = collision_guard(contact, Pose(1.2, 0, 0), WORLD, PARAMS)
        assert pushed.x == pytest.approx(0.85, abs=1e-9)

    def test_can_leave_contact(self):
        contact = Pose(0.85, 0, math.pi)
        away = collision_guard(contact, Pose(0.5, 0, math.pi), WORLD, PARAMS)
        assert away.x == pytest.approx(0.5)

    def test_bounds_respected(self):
        out = collision_guard(Pose(4.5, 0, 0), Pose(6.0, 0, 0), WORLD, PARAMS)
        assert out.x == pytest.approx(5.0 - PARAMS.bot_radius_m, abs=1e-9)

    def test_rotation_never_blocked(self):
        contact = Pose(0.85, 0, 0)
        turned = collision_guard(contact, Pose(0.85, 0, 1.0), WORLD, PARAMS)
        assert turned.heading == pytest.approx(1.0)

    def test_never_penetrates_under_random_drive(self):
        rng = random.Random(31)
        world = World(Rect(-5, -5, 5, 5),
                      (Rect(1.0, -1.0, 1.5, 1.0), Rect(-3.0, 2.0, -1.0, 3.5)))
        pose = Pose(0, 0, 0)
        for _ in range(2000):
            cmd = MotorCommand(rng.uniform(-100, 100), rng.uniform(-100, 100))
            proposed = step(pose, cmd, 0.05, PARAMS)
            pose = collision_guard(pose, proposed, world, PARAMS)
            for ob in world.obstacles:
                assert dist_to_rect(pose.x, pose.y, ob) >= PARAMS.bot_radius_m - 1e-9
            assert world.bounds.xmin + PARAMS.bot_radius_m - 1e-9 <= pose.x
            assert pose.x <= world.bounds.xmax - PARAMS.bot_radius_m + 1e-9
            assert world.bounds.ymin + PARAMS.bot_radius_m - 1e-9 <= pose.y
            assert pose.y <= world.bounds.ymax - PARAMS.bot_radius_m + 1e-9


class TestWorld:
    def test_obstacle_outside_bounds_rejected(self):
        with pytest.raises(ValueError):
            World(Rect(-1, -1, 1, 1), (Rect(0.5, 0.5, 2.0, 2.0),))

    def test_degenerate_rect_rejected(self):
        with pytest.raises(ValueError):
            Rect(1, 1, 1, 2)

    def test_motor_duty_clamped(self):
        cmd = MotorCommand(150, -150)
        assert cmd.left_duty == 100 and cmd.right_duty == -100
