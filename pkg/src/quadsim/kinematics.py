"""Leg forward/inverse kinematics and whole-body orientation math.

Everything here is a pure function of its inputs; all angles are radians and
all lengths are meters.

Frame conventions (used by every other module):

* Body frame: x forward, y left, z up, origin at the body geometric center.
* Hip frame: axes parallel to the body frame at zero pose, origin at the
  hip-roll joint of that leg.
* Foot targets are expressed in the hip frame; a standing foot is at negative z.

Leg model (3 DoF per leg):

* ``hip`` (theta1): roll about the +x axis. The hip link of length ``l_hip``
  runs laterally from the roll axis to the upper-leg joint (+y on left legs,
  -y on right legs).
* ``upper`` (theta2): pitch of the upper link in the leg plane, zero pointing
  straight down, positive swinging the foot forward (geometrically a rotation
  about -y).
* ``lower`` (theta3): the knee servo sits at the hip and drives the lower link
  through a parallel linkage, so theta3 positions the shank relative to the
  hip frame, not relative to the upper link. The shank's pitch (same sign
  convention as theta2) is ``KNEE_SHANK_DOWN - theta3``: at theta3 = 55 deg
  the shank hangs vertical, and the stock interval [30 deg, 130 deg] sweeps
  the shank from 25 deg forward to 75 deg backward.

With the stock 150 mm + 150 mm links this makes the vertical reach span
77.7 mm to 300 mm, bracketing the platform's published 80-240 mm working
height range.

The IK solver always returns the posture whose knee vertex lies forward of
the hip-to-foot line (the bend opens backward); the mirrored posture is
rejected even when it would be within limits, so the solver is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, NamedTuple, Tuple

import numpy as np

TWO_PI = 2.0 * math.pi

# Knee angle at which the shank hangs straight down (see module docstring).
KNEE_SHANK_DOWN = math.radians(55.0)

# Slack for joint-limit checks: float dust this small is clamped onto the
# boundary instead of rejected, worth < 1e-9 m at the foot.
LIMIT_EPS = 1e-9


class KinematicsError(Exception):
    """Base class for kinematics failures."""


class Unreachable(KinematicsError):
    """Target is outside the leg's geometric workspace."""


class JointLimitViolation(KinematicsError):
    """Target is geometrically solvable but violates a joint limit."""


class BodyPoseInfeasible(KinematicsError):
    """A body pose demands an unreachable target for at least one leg."""

    def __init__(self, failures: Dict["LegId", KinematicsError]):
        self.failures = failures
        legs = ", ".join(f"{leg.name}: {err}" for leg, err in failures.items())
        super().__init__(f"body pose infeasible for {legs}")


class LegId(Enum):
    """The four legs. Values order the 12-joint vectors used downstream."""

    FL = 0
    FR = 1
    BL = 2
    BR = 3

    @property
    def side(self) -> int:
        """+1 for left legs, -1 for right legs."""
        return 1 if self in (LegId.FL, LegId.BL) else -1

    @property
    def end(self) -> int:
        """+1 for front legs, -1 for back legs."""
        return 1 if self in (LegId.FL, LegId.FR) else -1


LEG_ORDER: Tuple[LegId, ...] = (LegId.FL, LegId.FR, LegId.BL, LegId.BR)


class JointAngles(NamedTuple):
    hip: float
    upper: float
    lower: float


class FootTarget(NamedTuple):
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class LegGeometry:
    """Link lengths and joint limit intervals shared by all four legs."""

    l_hip: float = 0.104
    l_upper: float = 0.150
    l_lower: float = 0.150
    hip_limits: Tuple[float, float] = (-math.pi / 2, math.pi / 2)
    upper_limits: Tuple[float, float] = (math.radians(-70.0), math.radians(170.0))
    lower_limits: Tuple[float, float] = (math.radians(30.0), math.radians(130.0))

    def __post_init__(self):
        for name in ("l_hip", "l_upper", "l_lower"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        for name in ("hip_limits", "upper_limits", "lower_limits"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"{name} must satisfy lo < hi")

    @property
    def max_reach(self) -> float:
        """Hip-plane distance of the fully extended leg."""
        return self.l_upper + self.l_lower


@dataclass(frozen=True)
class HipMounts:
    """Hip-roll joint positions relative to the body center (symmetric)."""

    x: float = 0.120
    y: float = 0.055
    z: float = 0.0

    def offset(self, leg: LegId) -> FootTarget:
        return FootTarget(leg.end * self.x, leg.side * self.y, self.z)


@dataclass(frozen=True)
class BodyPose:
    """Body height above ground, orientation, and walk-gait lateral lean."""

    height: float = 0.17
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0
    lateral_shift: float = 0.0


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(a + math.pi, TWO_PI)
    if a <= 0.0:
        a += TWO_PI
    return a - math.pi


def knee_angle_for_straight_leg(upper: float) -> float:
    """Knee angle that makes the shank collinear with the upper link.

    Because the knee is hip-referenced this depends on the upper-leg angle;
    at upper = 0 it equals KNEE_SHANK_DOWN.
    """
    return KNEE_SHANK_DOWN - upper


def shank_pitch(lower: float) -> float:
    """Absolute pitch of the lower link for a given knee angle."""
    return KNEE_SHANK_DOWN - lower


def leg_fk(angles: JointAngles, geom: LegGeometry, leg: LegId) -> FootTarget:
    """Foot position in the hip frame. Total on finite inputs; limits are
    deliberately not enforced so this can serve as the IK oracle anywhere."""
    hip, upper, lower = angles
    alpha = shank_pitch(lower)
    px = geom.l_upper * math.sin(upper) + geom.l_lower * math.sin(alpha)
    pz = -geom.l_upper * math.cos(upper) - geom.l_lower * math.cos(alpha)
    ly = leg.side * geom.l_hip
    c1, s1 = math.cos(hip), math.sin(hip)
    return FootTarget(px, ly * c1 - pz * s1, ly * s1 + pz * c1)


def _check_limit(value: float, limits: Tuple[float, float], name: str, leg: LegId) -> float:
    lo, hi = limits
    if value < lo - LIMIT_EPS or value > hi + LIMIT_EPS:
        raise JointLimitViolation(
            f"{leg.name} {name} angle {math.degrees(value):.2f} deg outside "
            f"[{math.degrees(lo):.1f}, {math.degrees(hi):.1f}] deg"
        )
    return min(max(value, lo), hi)


def leg_ik(target: FootTarget, geom: LegGeometry, leg: LegId) -> JointAngles:
    """Closed-form IK for one leg.

    Hip roll comes from the (y, z) projection with the lateral hip-link
    offset, then the planar two-link problem is solved in the leg plane.
    Raises Unreachable for targets outside the workspace and
    JointLimitViolation for solvable targets outside the joint ranges.
    """
    x, y, z = target
    ly = leg.side * geom.l_hip

    r_sq = y * y + z * z
    plane_sq = r_sq - geom.l_hip * geom.l_hip
    if plane_sq < -LIMIT_EPS:
        raise Unreachable(
            f"{leg.name} target {target} closer to the roll axis than the hip link"
        )
    # Foot-below-the-hip-link branch; the mirrored plane is never used.
    pz = -math.sqrt(max(plane_sq, 0.0))
    hip = wrap_angle(math.atan2(z, y) - math.atan2(pz, ly))

    d_sq = x * x + pz * pz
    d = math.sqrt(d_sq)
    if d > geom.max_reach + 1e-12:
        raise Unreachable(
            f"{leg.name} target {target} beyond maximum reach {geom.max_reach:.3f} m"
        )
    if d < abs(geom.l_upper - geom.l_lower) + 1e-12 or d < 1e-9:
        raise Unreachable(f"{leg.name} target {target} inside minimum-reach annulus")

    # Bend angle between the two links; vertex-forward branch (bend opens
    # backward), so the upper link leads the hip-to-foot ray.
    cos_bend = (d_sq - geom.l_upper**2 - geom.l_lower**2) / (2.0 * geom.l_upper * geom.l_lower)
    cos_bend = min(1.0, max(-1.0, cos_bend))
    bend = math.acos(cos_bend)
    gamma = math.atan2(x, -pz)
    rho = math.atan2(geom.l_lower * math.sin(bend), geom.l_upper + geom.l_lower * math.cos(bend))

    upper = wrap_angle(gamma + rho)
    alpha = upper - bend
    lower = KNEE_SHANK_DOWN - alpha

    hip = _check_limit(hip, geom.hip_limits, "hip", leg)
    upper = _check_limit(upper, geom.upper_limits, "upper", leg)
    lower = _check_limit(lower, geom.lower_limits, "lower", leg)
    return JointAngles(hip, upper, lower)


def reachable(target: FootTarget, geom: LegGeometry, leg: LegId) -> bool:
    """True iff leg_ik succeeds, joint limits included."""
    try:
        leg_ik(target, geom, leg)
    except KinematicsError:
        return False
    return True


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def body_rotation(pose: BodyPose) -> np.ndarray:
    """Body orientation matrix, composed as Rz(yaw) . Ry(pitch) . Rx(roll)."""
    if pose.roll == 0.0 and pose.pitch == 0.0 and pose.yaw == 0.0:
        return np.eye(3)
    return rot_z(pose.yaw) @ rot_y(pose.pitch) @ rot_x(pose.roll)


def neutral_world_feet(geom: LegGeometry, mounts: HipMounts) -> Dict[LegId, FootTarget]:
    """Ground points directly under each hip at zero pose.

    World frame: origin on the ground under the neutral body center.
    """
    feet = {}
    for leg in LEG_ORDER:
        m = mounts.offset(leg)
        feet[leg] = FootTarget(m.x, m.y + leg.side * geom.l_hip, 0.0)
    return feet


def leg_targets_for_pose(
    pose: BodyPose,
    world_feet: Dict[LegId, FootTarget],
    mounts: HipMounts,
) -> Dict[LegId, FootTarget]:
    """Hip-frame targets that hold the given world foot positions under the
    given body pose. No reachability check; see body_ik."""
    rot = body_rotation(pose)
    t_body = np.array([0.0, pose.lateral_shift, pose.height])
    targets = {}
    for leg, foot in world_feet.items():
        local = rot.T @ (np.asarray(foot, dtype=float) - t_body)
        m = mounts.offset(leg)
        targets[leg] = FootTarget(local[0] - m.x, local[1] - m.y, local[2] - m.z)
    return targets


def body_ik(
    pose: BodyPose,
    world_feet: Dict[LegId, FootTarget],
    mounts: HipMounts,
    geom: LegGeometry,
) -> Dict[LegId, FootTarget]:
    """Hip-frame targets for a body pose, validated against each leg's
    workspace. Raises BodyPoseInfeasible naming every failing leg."""
    targets = leg_targets_for_pose(pose, world_feet, mounts)
    failures: Dict[LegId, KinematicsError] = {}
    for leg, target in targets.items():
        try:
            leg_ik(target, geom, leg)
        except KinematicsError as err:
            failures[leg] = err
    if failures:
        raise BodyPoseInfeasible(failures)
    return targets
