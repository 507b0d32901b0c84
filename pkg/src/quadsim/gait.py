"""Gait generation: phase scheduling, swing/stance trajectories, trot and
walk patterns, side-walk steering, and the static-stability margin.

All functions are pure in (phase, command); the gait clock itself lives in
the controller. Phases are unitless in [0, 1). Displacements are offsets
from each leg's neutral stance point, expressed in the ground frame
(x forward, y left, z up).

Pattern timing:

* trot: diagonal pairs (FL, BR) and (FR, BL) alternate, duty factor 0.5.
* walk: one leg swings at a time in the order BR, FR, BL, FL (duty 0.75),
  while the body leans away from the swinging side so the center of mass
  stays inside the support triangle.

A leg's stance window is closed at its trailing edge, so at segment
boundary phases both the landing and the lifting leg count as grounded.
The walk gait relies on this: its lateral lean crosses zero exactly at
those four-legged instants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

from quadsim.kinematics import LEG_ORDER, HipMounts, LegId

Displacement = Tuple[float, float, float]


class GaitPattern(Enum):
    TROT = "trot"
    WALK = "walk"


class SideWalkMode(Enum):
    LINEAR = "linear"
    ROTATION = "rotation"


@dataclass(frozen=True)
class GaitCommand:
    """Teleop-tunable gait parameters (clamping happens upstream)."""

    pattern: GaitPattern = GaitPattern.TROT
    step_length_x: float = 0.0
    step_length_y: float = 0.0
    swing_height: float = 0.0
    stance_depth: float = 0.0
    side_walk_mode: SideWalkMode = SideWalkMode.LINEAR
    cycle_period: float = 0.8


@dataclass(frozen=True)
class FootPlan:
    """Per-leg displacement from neutral stance plus support bookkeeping."""

    displacements: Dict[LegId, Displacement]
    stance: Dict[LegId, bool]
    lateral_shift: float = 0.0


TROT_DUTY = 0.5
TROT_OFFSETS: Dict[LegId, float] = {LegId.FL: 0.0, LegId.BR: 0.0, LegId.FR: 0.5, LegId.BL: 0.5}

WALK_DUTY = 0.75
# Swing order BR, FR, BL, FL in consecutive quarter-cycles.
WALK_OFFSETS: Dict[LegId, float] = {LegId.FL: 0.0, LegId.BR: 0.25, LegId.FR: 0.5, LegId.BL: 0.75}


@dataclass(frozen=True)
class GaitPhase:
    """A gait clock reading: the global phase plus the pattern's fixed
    per-leg offsets and duty factor."""

    global_phase: float
    offsets: Dict[LegId, float]
    duty_factor: float

    @classmethod
    def for_pattern(cls, pattern: GaitPattern, global_phase: float) -> "GaitPhase":
        if pattern is GaitPattern.WALK:
            return cls(global_phase % 1.0, dict(WALK_OFFSETS), WALK_DUTY)
        return cls(global_phase % 1.0, dict(TROT_OFFSETS), TROT_DUTY)

    def leg(self, leg: LegId) -> Tuple[bool, float]:
        return leg_phase(self.global_phase, self.offsets[leg], self.duty_factor)

# Lean ramp width as a fraction of the cycle, centered on each side change.
LEAN_RAMP = 0.10
DEFAULT_MAX_LEAN = 0.03


class DegenerateSupport(Exception):
    """Fewer than three stance feet: no support polygon to score."""


def leg_phase(global_phase: float, offset: float, duty: float) -> Tuple[bool, float]:
    """Split a leg's shifted phase into (is_stance, local segment phase).

    Stance occupies [0, duty] of the shifted cycle (closed at duty, see
    module docstring), swing the remainder; local phase is rescaled to its
    segment.
    """
    shifted = (global_phase - offset) % 1.0
    if shifted <= duty:
        return True, shifted / duty
    return False, (shifted - duty) / (1.0 - duty)


def swing_displacement(local_phase: float, cmd: GaitCommand) -> Displacement:
    """Swing: horizontal travel -step/2 -> +step/2 with sinusoidal lift."""
    progress = local_phase - 0.5
    return (
        cmd.step_length_x * progress,
        cmd.step_length_y * progress,
        cmd.swing_height * math.sin(math.pi * local_phase),
    )


def stance_displacement(local_phase: float, cmd: GaitCommand) -> Displacement:
    """Stance: linear sweep +step/2 -> -step/2, optional ground press."""
    progress = 0.5 - local_phase
    return (
        cmd.step_length_x * progress,
        cmd.step_length_y * progress,
        -cmd.stance_depth * math.sin(math.pi * local_phase),
    )


def steer_displacement(
    leg: LegId, base: Displacement, cmd: GaitCommand, mounts: HipMounts = HipMounts()
) -> Displacement:
    """Remap the lateral step channel for the side-walk mode.

    Linear mode strafes: every leg keeps the same displacement. Rotation
    mode turns: each leg steps along the yaw tangent through its hip mount,
    scaled so the mean tangent magnitude equals |step_length_y| (positive =
    counterclockwise).
    """
    if cmd.side_walk_mode is SideWalkMode.LINEAR or cmd.step_length_y == 0.0:
        return base
    dx, dy, dz = base
    progress = dy / cmd.step_length_y
    mount = mounts.offset(leg)
    mean_radius = math.hypot(mounts.x, mounts.y)
    scale = cmd.step_length_y / mean_radius
    return (dx + progress * scale * -mount.y, progress * scale * mount.x, dz)


def _leg_displacement(
    leg: LegId, phase: GaitPhase, cmd: GaitCommand, mounts: HipMounts
) -> Tuple[bool, Displacement]:
    is_stance, local = phase.leg(leg)
    base = stance_displacement(local, cmd) if is_stance else swing_displacement(local, cmd)
    return is_stance, steer_displacement(leg, base, cmd, mounts)


def plan_trot(
    global_phase: float, cmd: GaitCommand, mounts: HipMounts = HipMounts()
) -> FootPlan:
    """Diagonal-pair trot; no body lean (dynamically balanced gait)."""
    phase = GaitPhase.for_pattern(GaitPattern.TROT, global_phase)
    disp, stance = {}, {}
    for leg in LEG_ORDER:
        stance[leg], disp[leg] = _leg_displacement(leg, phase, cmd, mounts)
    return FootPlan(disp, stance, 0.0)


def _smoothstep(t: float) -> float:
    t = min(1.0, max(0.0, t))
    return t * t * (3.0 - 2.0 * t)


def walk_lean(global_phase: float, amplitude: float) -> float:
    """Lateral body lean for the walk gait.

    Positive (left) through the right-leg swings in [0, 0.5), negative
    through the left-leg swings, with smoothstep ramps of width LEAN_RAMP
    centered on the side changes at phases 0.0 and 0.5 (zero crossings land
    exactly on the four-feet-down boundary instants).
    """
    p = global_phase % 1.0
    half = LEAN_RAMP / 2.0
    if p < half:  # tail of the ramp centered at 0
        return amplitude * (2.0 * _smoothstep(0.5 + p / LEAN_RAMP) - 1.0)
    if p > 1.0 - half:
        return amplitude * (2.0 * _smoothstep((p - 1.0 + half) / LEAN_RAMP) - 1.0)
    if abs(p - 0.5) < half:
        return amplitude * (1.0 - 2.0 * _smoothstep((p - 0.5 + half) / LEAN_RAMP))
    return amplitude if p < 0.5 else -amplitude


def plan_walk(
    global_phase: float,
    cmd: GaitCommand,
    mounts: HipMounts = HipMounts(),
    max_lean: float = DEFAULT_MAX_LEAN,
) -> FootPlan:
    """Statically stable crawl: one swing leg, three in stance, body leaned
    away from the swing side. The lean amplitude follows the swing height so
    a zero command produces the neutral plan."""
    phase = GaitPhase.for_pattern(GaitPattern.WALK, global_phase)
    disp, stance = {}, {}
    for leg in LEG_ORDER:
        stance[leg], disp[leg] = _leg_displacement(leg, phase, cmd, mounts)
    amplitude = min(max_lean, 0.75 * cmd.swing_height)
    return FootPlan(disp, stance, walk_lean(global_phase, amplitude))


def plan(
    global_phase: float,
    cmd: GaitCommand,
    mounts: HipMounts = HipMounts(),
    max_lean: float = DEFAULT_MAX_LEAN,
) -> FootPlan:
    if cmd.pattern is GaitPattern.WALK:
        return plan_walk(global_phase, cmd, mounts, max_lean)
    return plan_trot(global_phase, cmd, mounts)


def _convex_hull(points: Sequence[Tuple[float, float]]) -> List[Tuple[float, float]]:
    """Monotone-chain hull, counterclockwise. Collinear inputs collapse to a
    2-point 'hull' (handled by the caller as zero-area support)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return list(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: List[Tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _point_segment_distance(p, a, b) -> float:
    ax, ay = b[0] - a[0], b[1] - a[1]
    length_sq = ax * ax + ay * ay
    if length_sq == 0.0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    t = ((p[0] - a[0]) * ax + (p[1] - a[1]) * ay) / length_sq
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - a[0] - t * ax, p[1] - a[1] - t * ay)


def com_margin(
    stance_feet: Sequence[Tuple[float, float]], com_xy: Tuple[float, float]
) -> float:
    """Signed distance from the CoM ground projection to the support polygon
    boundary: positive inside, negative outside, zero on the edge. The
    polygon is the convex hull of the stance foot positions."""
    if len(stance_feet) < 3:
        raise DegenerateSupport(f"need >= 3 stance feet, got {len(stance_feet)}")
    hull = _convex_hull([(float(x), float(y)) for x, y in stance_feet])
    boundary = min(
        _point_segment_distance(com_xy, hull[i], hull[(i + 1) % len(hull)])
        for i in range(len(hull))
    )
    if len(hull) <= 2:
        return -boundary  # collinear feet cannot contain the CoM
    inside = all(
        (hull[(i + 1) % len(hull)][0] - hull[i][0]) * (com_xy[1] - hull[i][1])
        - (hull[(i + 1) % len(hull)][1] - hull[i][1]) * (com_xy[0] - hull[i][0])
        >= 0.0
        for i in range(len(hull))
    )
    return boundary if inside else -boundary
