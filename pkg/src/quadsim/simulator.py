"""Kinematic digital twin.

Integrates rate-limited servo motion toward each commanded joint target,
reconstructs foot positions by forward kinematics, derives planar body
odometry from the rigid motion of continuously grounded feet, and scores
static stability. No forces, no contact dynamics: the lowest foot defines
the ground, and the body carries no simulated attitude (commanded roll or
pitch shows up through the joint angles alone, and odometry is planar).

The same step function serves the live teleop service and headless scenario
runs; given the same frame and dt sequence the final state is identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from quadsim.config import Config
from quadsim.controller import JointCommandFrame
from quadsim.gait import com_margin
from quadsim.kinematics import (
    LEG_ORDER,
    FootTarget,
    JointAngles,
    LegGeometry,
    LegId,
    leg_fk,
)

Vec3 = Tuple[float, float, float]


class NoStanceFeet(Exception):
    """No continuously grounded feet this tick: odometry must freeze."""


@dataclass(frozen=True)
class ServoModel:
    """Rate-and-range servo abstraction (torque recorded, not simulated)."""

    max_speed: float = 7.0  # rad/s
    limits: Tuple[float, float] = (-math.pi, math.pi)
    max_torque: float = 7.0  # N*m


@dataclass(frozen=True)
class RobotState:
    """Snapshot of the simulated robot."""

    time: float
    joints: Tuple[float, ...]
    velocities: Tuple[float, ...]
    odometry: Tuple[float, float, float]  # x, y, heading in the world frame
    body_z: float
    feet_world: Tuple[Vec3, ...]  # ordered like LEG_ORDER
    stance: Tuple[bool, ...]
    com_margin: Optional[float]
    diagnostics: Tuple[str, ...] = ()

    def leg_joints(self, leg: LegId) -> JointAngles:
        base = leg.value * 3
        return JointAngles(*self.joints[base : base + 3])


def servo_step(current: float, commanded: float, dt: float, model: ServoModel) -> float:
    """Move toward the commanded position by at most max_speed*dt, clamped
    into the servo's position limits."""
    lo, hi = model.limits
    target = min(hi, max(lo, commanded))
    delta = target - current
    max_delta = model.max_speed * dt
    if abs(delta) <= max_delta:
        return target
    return current + math.copysign(max_delta, delta)


def fit_rigid_2d(
    prev_xy: Sequence[Tuple[float, float]], new_xy: Sequence[Tuple[float, float]]
) -> Tuple[float, float, float]:
    """Least-squares rigid transform (dx, dy, dtheta) mapping prev -> new.

    Closed-form 2D Procrustes: rotation from the centered cross/dot sums,
    translation from the centroids. A single pair degenerates to pure
    translation.
    """
    n = len(prev_xy)
    if n == 0:
        raise NoStanceFeet("rigid fit needs at least one point pair")
    pcx = sum(p[0] for p in prev_xy) / n
    pcy = sum(p[1] for p in prev_xy) / n
    qcx = sum(q[0] for q in new_xy) / n
    qcy = sum(q[1] for q in new_xy) / n
    cross = dot = 0.0
    for (px, py), (qx, qy) in zip(prev_xy, new_xy):
        ax, ay = px - pcx, py - pcy
        bx, by = qx - qcx, qy - qcy
        cross += ax * by - ay * bx
        dot += ax * bx + ay * by
    theta = math.atan2(cross, dot) if (cross or dot) else 0.0
    c, s = math.cos(theta), math.sin(theta)
    tx = qcx - (c * pcx - s * pcy)
    ty = qcy - (s * pcx + c * pcy)
    return tx, ty, theta


def odometry_update(
    prev_feet_xy: Sequence[Tuple[float, float]],
    new_feet_xy: Sequence[Tuple[float, float]],
    stance_flags: Sequence[bool],
) -> Tuple[float, float, float]:
    """Planar body motion implied by grounded-foot motion in the body frame.

    Feet fixed on the ground move rigidly by the inverse of the body's own
    motion, so the fit is inverted to recover (dx, dy, dheading).
    """
    pairs_prev = [p for p, s in zip(prev_feet_xy, stance_flags) if s]
    pairs_new = [q for q, s in zip(new_feet_xy, stance_flags) if s]
    if not pairs_prev:
        raise NoStanceFeet("no stance feet for odometry")
    tx, ty, theta = fit_rigid_2d(pairs_prev, pairs_new)
    c, s = math.cos(theta), math.sin(theta)
    # inverse transform: R(-theta), -R(-theta) t
    return -(c * tx + s * ty), -(-s * tx + c * ty), -theta


class Simulator:
    """Single-owner stepped state; step() is the only mutator."""

    def __init__(self, config: Config, initial_joints: Optional[Sequence[float]] = None):
        self._geom: LegGeometry = config.leg_geometry()
        self._mounts = config.hip_mounts()
        self._contact_eps = config.sim.contact_epsilon
        limit_map = {
            0: self._geom.hip_limits,
            1: self._geom.upper_limits,
            2: self._geom.lower_limits,
        }
        self._servos = tuple(
            ServoModel(
                max_speed=config.servo.max_speed,
                limits=limit_map[i % 3],
                max_torque=config.servo.max_torque,
            )
            for i in range(12)
        )
        if initial_joints is None:
            initial_joints = self._rest_joints(config)
        self.state = self._derive_state(
            time=0.0,
            joints=tuple(initial_joints),
            velocities=(0.0,) * 12,
            odometry=(0.0, 0.0, 0.0),
            prev_feet_body=None,
            prev_stance=None,
            diagnostics=(),
        )

    def _rest_joints(self, config: Config) -> Tuple[float, ...]:
        from quadsim.kinematics import leg_ik  # local import avoids cycle at module load

        joints: List[float] = []
        for leg in LEG_ORDER:
            target = FootTarget(0.0, leg.side * self._geom.l_hip, -config.body.sit_height)
            joints.extend(leg_ik(target, self._geom, leg))
        return tuple(joints)

    # -- internals ----------------------------------------------------------

    def _feet_body(self, joints: Tuple[float, ...]) -> Dict[LegId, Vec3]:
        feet = {}
        for leg in LEG_ORDER:
            base = leg.value * 3
            foot = leg_fk(JointAngles(*joints[base : base + 3]), self._geom, leg)
            m = self._mounts.offset(leg)
            feet[leg] = (foot.x + m.x, foot.y + m.y, foot.z + m.z)
        return feet

    def _derive_state(
        self, time, joints, velocities, odometry, prev_feet_body, prev_stance, diagnostics
    ) -> RobotState:
        feet_body = self._feet_body(joints)
        body_z = -min(f[2] for f in feet_body.values())
        stance = tuple(feet_body[leg][2] + body_z <= self._contact_eps for leg in LEG_ORDER)

        diag = list(diagnostics)
        x, y, heading = odometry
        if prev_feet_body is not None:
            both = [a and b for a, b in zip(prev_stance, stance)]
            try:
                dx, dy, dheading = odometry_update(
                    [prev_feet_body[leg][:2] for leg in LEG_ORDER],
                    [feet_body[leg][:2] for leg in LEG_ORDER],
                    both,
                )
                c, s = math.cos(heading), math.sin(heading)
                x += c * dx - s * dy
                y += s * dx + c * dy
                heading = heading + dheading
            except NoStanceFeet:
                diag.append("odometry frozen: no continuously grounded feet")

        c, s = math.cos(heading), math.sin(heading)
        feet_world = tuple(
            (
                x + c * feet_body[leg][0] - s * feet_body[leg][1],
                y + s * feet_body[leg][0] + c * feet_body[leg][1],
                feet_body[leg][2] + body_z,
            )
            for leg in LEG_ORDER
        )
        margin = None
        if sum(stance) >= 3:
            margin = com_margin(
                [f[:2] for f, st in zip(feet_world, stance) if st], (x, y)
            )
        self._feet_body_cache = feet_body
        return RobotState(
            time=time,
            joints=joints,
            velocities=velocities,
            odometry=(x, y, heading),
            body_z=body_z,
            feet_world=feet_world,
            stance=stance,
            com_margin=margin,
            diagnostics=tuple(diag),
        )

    @property
    def feet_body(self) -> Dict[LegId, Vec3]:
        """Body-frame feet of the current state (telemetry convenience)."""
        return dict(self._feet_body_cache)

    # -- the one mutator ------------------------------------------------------

    def step(self, frame: JointCommandFrame, dt: float) -> RobotState:
        if dt <= 0:
            raise ValueError("dt must be positive")
        prev = self.state
        prev_feet_body = self._feet_body_cache
        joints = tuple(
            servo_step(cur, cmd, dt, servo)
            for cur, cmd, servo in zip(prev.joints, frame.joints, self._servos)
        )
        velocities = tuple((j - p) / dt for j, p in zip(joints, prev.joints))
        self.state = self._derive_state(
            time=prev.time + dt,
            joints=joints,
            velocities=velocities,
            odometry=prev.odometry,
            prev_feet_body=prev_feet_body,
            prev_stance=prev.stance,
            diagnostics=frame.diagnostics,
        )
        return self.state
