"""Gait scheduling, trajectory, steering, and pattern tests."""

import math
import random

import pytest

from quadsim.gait import (
    GaitCommand,
    GaitPattern,
    SideWalkMode,
    TROT_DUTY,
    TROT_OFFSETS,
    WALK_DUTY,
    WALK_OFFSETS,
    leg_phase,
    plan,
    plan_trot,
    plan_walk,
    stance_displacement,
    steer_displacement,
    swing_displacement,
    walk_lean,
)
from quadsim.kinematics import HipMounts, LegGeometry, LegId, neutral_world_feet

MOUNTS = HipMounts()
GEOM = LegGeometry()
NEUTRAL_FEET = neutral_world_feet(GEOM, MOUNTS)

WALK_CMD = GaitCommand(
    pattern=GaitPattern.WALK, step_length_x=0.04, swing_height=0.04, cycle_period=1.6
)
TROT_CMD = GaitCommand(
    pattern=GaitPattern.TROT, step_length_x=0.06, swing_height=0.04, cycle_period=0.8
)


# ---------------------------------------------------------------------------
# phase clock
# ---------------------------------------------------------------------------


def test_leg_phase_stance_midpoint():
    assert leg_phase(0.25, 0.0, 0.5) == (True, 0.5)


def test_leg_phase_swing_midpoint():
    assert leg_phase(0.75, 0.0, 0.5) == (False, 0.5)


def test_leg_phase_offset_wrap():
    is_stance, local = leg_phase(0.10, 0.5, 0.75)
    assert is_stance
    assert local == pytest.approx(0.8)


def test_gait_phase_reading():
    from quadsim.gait import GaitPhase

    phase = GaitPhase.for_pattern(GaitPattern.WALK, 1.125)
    assert phase.global_phase == pytest.approx(0.125)
    assert phase.duty_factor == WALK_DUTY
    assert phase.offsets == WALK_OFFSETS
    is_stance, _ = phase.leg(LegId.BR)
    assert not is_stance  # BR swings in the first quarter
    assert all(phase.leg(leg)[0] for leg in (LegId.FL, LegId.FR, LegId.BL))


def test_leg_phase_duty_accounting():
    # sweep at 1e-3 resolution: each leg spends exactly its duty fraction in
    # stance, within 2e-3
    for offsets, duty in ((TROT_OFFSETS, TROT_DUTY), (WALK_OFFSETS, WALK_DUTY)):
        for leg, offset in offsets.items():
            samples = 1000
            in_stance = sum(
                leg_phase(i / samples, offset, duty)[0] for i in range(samples)
            )
            assert abs(in_stance / samples - duty) <= 2e-3, leg


# ---------------------------------------------------------------------------
# swing / stance trajectories
# ---------------------------------------------------------------------------


def test_swing_midpoint_is_peak_lift():
    cmd = GaitCommand(step_length_x=0.06, swing_height=0.04)
    assert swing_displacement(0.5, cmd) == pytest.approx((0.0, 0.0, 0.04), abs=1e-15)


def test_swing_liftoff_point():
    cmd = GaitCommand(step_length_x=0.06, step_length_y=0.02, swing_height=0.04)
    assert swing_displacement(0.0, cmd) == pytest.approx((-0.03, -0.01, 0.0), abs=1e-15)


def test_swing_quarter_lift():
    cmd = GaitCommand(swing_height=0.04)
    dz = swing_displacement(0.25, cmd)[2]
    assert dz == pytest.approx(0.04 * math.sin(math.pi / 4), abs=1e-12)
    assert dz == pytest.approx(0.02828, abs=5e-6)


def test_stance_zero_depth_midpoint():
    assert stance_displacement(0.5, GaitCommand()) == pytest.approx((0.0, 0.0, 0.0))


def test_stance_touchdown_point():
    cmd = GaitCommand(step_length_x=0.06)
    assert stance_displacement(0.0, cmd) == pytest.approx((0.03, 0.0, 0.0))


def test_swing_stance_seam_continuity():
    rng = random.Random(7)
    for _ in range(200):
        cmd = GaitCommand(
            step_length_x=rng.uniform(-0.1, 0.1),
            step_length_y=rng.uniform(-0.06, 0.06),
            swing_height=rng.uniform(0.0, 0.08),
            stance_depth=rng.uniform(0.0, 0.02),
        )
        eps = 1e-12
        stance_end = stance_displacement(1.0 - eps, cmd)
        swing_start = swing_displacement(0.0, cmd)
        assert math.dist(stance_end, swing_start) <= 1e-9
        swing_end = swing_displacement(1.0 - eps, cmd)
        stance_start = stance_displacement(0.0, cmd)
        assert math.dist(swing_end, stance_start) <= 1e-9


# ---------------------------------------------------------------------------
# side-walk steering
# ---------------------------------------------------------------------------


def test_steer_linear_is_identity():
    cmd = GaitCommand(step_length_x=0.03, step_length_y=0.01)
    base = (0.015, 0.005, 0.02)
    for leg in LegId:
        assert steer_displacement(leg, base, cmd, MOUNTS) == base


def test_steer_rotation_spin_signature():
    cmd = GaitCommand(step_length_y=0.04, side_walk_mode=SideWalkMode.ROTATION)
    base = swing_displacement(0.9, cmd)  # forward swing progress
    tangents = {leg: steer_displacement(leg, base, cmd, MOUNTS) for leg in LegId}
    # left-side tangent x opposes right-side tangent x: pure spin
    assert tangents[LegId.FL][0] < 0 < tangents[LegId.FR][0]
    assert tangents[LegId.BL][0] < 0 < tangents[LegId.BR][0]
    # front/back y components oppose as well
    assert tangents[LegId.FL][1] > 0 > tangents[LegId.BL][1]
    # mean tangent magnitude matches the commanded step at full progress
    progress = base[1] / cmd.step_length_y
    mags = [math.hypot(t[0], t[1]) for t in tangents.values()]
    assert sum(mags) / 4 == pytest.approx(abs(progress) * cmd.step_length_y, rel=1e-9)


def test_steer_rotation_zero_side_step():
    cmd = GaitCommand(side_walk_mode=SideWalkMode.ROTATION, step_length_y=0.0)
    for leg in LegId:
        assert steer_displacement(leg, (0.0, 0.0, 0.0), cmd, MOUNTS) == (0.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# trot plan
# ---------------------------------------------------------------------------


def test_trot_first_half_swings_bl_fr():
    fp = plan_trot(0.25, TROT_CMD, MOUNTS)
    assert not fp.stance[LegId.BL] and not fp.stance[LegId.FR]
    assert fp.stance[LegId.BR] and fp.stance[LegId.FL]


def test_trot_second_half_swings_br_fl():
    fp = plan_trot(0.75, TROT_CMD, MOUNTS)
    assert not fp.stance[LegId.BR] and not fp.stance[LegId.FL]
    assert fp.stance[LegId.BL] and fp.stance[LegId.FR]


def test_trot_zero_command_fixpoint():
    cmd = GaitCommand()
    for i in range(50):
        fp = plan_trot(i / 50, cmd, MOUNTS)
        for leg in LegId:
            assert fp.displacements[leg] == (0.0, 0.0, 0.0)
        assert fp.lateral_shift == 0.0


def test_trot_diagonal_pairing():
    for i in range(2000):
        p = i / 2000
        fp = plan_trot(p, TROT_CMD, MOUNTS)
        assert fp.stance[LegId.FL] == fp.stance[LegId.BR]
        assert fp.stance[LegId.FR] == fp.stance[LegId.BL]
        at_boundary = p % 0.5 == 0.0
        if not at_boundary:
            assert fp.stance[LegId.FL] != fp.stance[LegId.FR]


def test_trot_lateral_shift_always_zero():
    for i in range(100):
        assert plan_trot(i / 100, WALK_CMD, MOUNTS).lateral_shift == 0.0


# ---------------------------------------------------------------------------
# walk plan
# ---------------------------------------------------------------------------


def test_walk_swing_order_and_lean_sign():
    # one swing leg per quarter, order BR, FR, BL, FL; lean away from the
    # swinging side
    expectations = [
        (0.125, LegId.BR, 1),
        (0.375, LegId.FR, 1),
        (0.625, LegId.BL, -1),
        (0.875, LegId.FL, -1),
    ]
    for phase, swinging, lean_sign in expectations:
        fp = plan_walk(phase, WALK_CMD, MOUNTS)
        for leg in LegId:
            assert fp.stance[leg] == (leg is not swinging), (phase, leg)
        assert math.copysign(1, fp.lateral_shift) == lean_sign


def test_walk_at_least_three_stance_everywhere():
    for i in range(4000):
        fp = plan_walk(i / 4000, WALK_CMD, MOUNTS)
        assert sum(fp.stance.values()) >= 3


def test_walk_margin_positive_at_every_sampled_phase():
    from quadsim.gait import com_margin

    for i in range(1000):
        fp = plan_walk(i / 1000, WALK_CMD, MOUNTS)
        stance_xy = [
            (NEUTRAL_FEET[leg].x + fp.displacements[leg][0],
             NEUTRAL_FEET[leg].y + fp.displacements[leg][1])
            for leg in LegId
            if fp.stance[leg]
        ]
        assert com_margin(stance_xy, (0.0, fp.lateral_shift)) > 0.0, i / 1000


def test_walk_zero_command_fixpoint():
    cmd = GaitCommand(pattern=GaitPattern.WALK)
    for i in range(50):
        fp = plan_walk(i / 50, cmd, MOUNTS)
        for leg in LegId:
            assert fp.displacements[leg] == (0.0, 0.0, 0.0)
        assert fp.lateral_shift == 0.0


def test_walk_lean_ramp_is_smooth_and_periodic():
    amp = 0.03
    assert walk_lean(0.0, amp) == 0.0
    assert walk_lean(0.5, amp) == 0.0
    assert walk_lean(0.25, amp) == amp
    assert walk_lean(0.75, amp) == -amp
    prev = walk_lean(0.0, amp)
    for i in range(1, 2001):
        cur = walk_lean(i / 2000, amp)
        assert abs(cur - prev) < amp * 0.02  # no jumps at ramp edges
        prev = cur
    assert walk_lean(0.3, amp) == walk_lean(1.3 % 1.0, amp)


# ---------------------------------------------------------------------------
# shared plan properties
# ---------------------------------------------------------------------------


def test_plan_periodicity_exact():
    # dyadic phases survive the +1 wrap bit-exactly
    for k in range(64):
        p = k / 64
        for cmd in (TROT_CMD, WALK_CMD):
            assert plan(p, cmd, MOUNTS) == plan(p + 1.0, cmd, MOUNTS)


def test_plan_continuity_dense_sweep():
    # foot targets are continuous in phase: dense differences stay below the
    # trajectory slope bound, and seam jumps are below 1e-6
    for cmd in (TROT_CMD, WALK_CMD):
        duty = TROT_DUTY if cmd.pattern is GaitPattern.TROT else WALK_DUTY
        slope = (
            max(abs(cmd.step_length_x), abs(cmd.step_length_y)) / min(duty, 1 - duty)
            + math.pi * max(cmd.swing_height, cmd.stance_depth) / (1 - duty)
            + 0.03 / 0.10  # lean ramp slope bound
        )
        step = 1e-4
        prev = plan(0.0, cmd, MOUNTS)
        for i in range(1, int(1 / step) + 1):
            cur = plan(i * step, cmd, MOUNTS)
            for leg in LegId:
                jump = math.dist(prev.displacements[leg], cur.displacements[leg])
                assert jump <= slope * step + 1e-6, (cmd.pattern, i * step)
            assert abs(cur.lateral_shift - prev.lateral_shift) <= slope * step + 1e-6
            prev = cur


def test_plan_seam_jumps_below_tolerance():
    eps = 1e-10
    seams = [k / 4 for k in range(5)] + [k / 2 for k in range(3)]
    for cmd in (TROT_CMD, WALK_CMD):
        for seam in seams:
            before = plan((seam - eps) % 1.0, cmd, MOUNTS)
            after = plan((seam + eps) % 1.0, cmd, MOUNTS)
            for leg in LegId:
                assert (
                    math.dist(before.displacements[leg], after.displacements[leg]) <= 1e-6
                )
