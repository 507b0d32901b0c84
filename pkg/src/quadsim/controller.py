"""Teleop command handling and the fixed-rate control pipeline.

One tick does: clamp the freshest teleop command, advance the mode machine,
slew the effective command toward it, advance the gait clock, compose the
foot plan with the whole-body transform, and solve leg IK into a 12-joint
frame. Everything is deterministic in (initial state, command trace, dt).

Mode machine: Idle <-> Standing via the start toggle, Standing <-> Walking
via the walk toggle. Dropping start from any mode settles to Idle; height
changes caused by mode transitions are ramped over a fixed duration so the
sit-down and stand-up are continuous.

Gait pattern or side-walk mode changes while stepping would teleport feet
mid-stride, so they are latched: the effective step parameters are driven
to zero first, the pattern swaps while the plan is neutral, and the gait
clock restarts from zero.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Tuple

from quadsim.config import Config
from quadsim.gait import FootPlan, GaitCommand, GaitPattern, SideWalkMode, plan
from quadsim.kinematics import (
    LEG_ORDER,
    BodyPose,
    FootTarget,
    JointAngles,
    KinematicsError,
    LegId,
    leg_ik,
    leg_targets_for_pose,
    neutral_world_feet,
)

NEUTRAL_EPS = 1e-6  # step/swing magnitude below which the plan is neutral


class NotInitialized(Exception):
    """The controller was used before being given a configuration."""


class ControllerMode(Enum):
    IDLE = "idle"
    STANDING = "standing"
    WALKING = "walking"


@dataclass(frozen=True)
class TeleopCommand:
    """The full teleop command set: toggles, gait tuning, body pose."""

    start: bool = False
    walk: bool = False
    pattern: GaitPattern = GaitPattern.TROT
    step_length_x: float = 0.0
    step_length_y: float = 0.0
    swing_height: float = 0.0
    stance_depth: float = 0.0
    side_walk_mode: SideWalkMode = SideWalkMode.LINEAR
    cycle_period: float = 0.8
    height: float = 0.17
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0
    timestamp: float = 0.0

    def gait_command(self) -> GaitCommand:
        return GaitCommand(
            pattern=self.pattern,
            step_length_x=self.step_length_x,
            step_length_y=self.step_length_y,
            swing_height=self.swing_height,
            stance_depth=self.stance_depth,
            side_walk_mode=self.side_walk_mode,
            cycle_period=self.cycle_period,
        )


@dataclass(frozen=True)
class SlewRates:
    """Per-field maximum rates for command smoothing."""

    height: float = 0.2          # m/s, body height and step heights
    angles: float = math.radians(90.0)  # rad/s, body orientation
    steps: float = 0.1           # m/s, step lengths


@dataclass(frozen=True)
class JointCommandFrame:
    """One tick's joint targets, ordered [FL, FR, BL, BR] x [hip, upper, lower]."""

    tick: int
    time: float
    joints: Tuple[float, ...]
    diagnostics: Tuple[str, ...] = ()

    def angles(self, leg: LegId) -> JointAngles:
        base = leg.value * 3
        return JointAngles(*self.joints[base : base + 3])


class CommandMailbox:
    """Latest-wins mailbox between any number of writers and the tick loop."""

    def __init__(self):
        self._lock = threading.Lock()
        self._latest: Optional[TeleopCommand] = None

    def put(self, cmd: TeleopCommand) -> None:
        with self._lock:
            self._latest = cmd

    def latest(self) -> Optional[TeleopCommand]:
        with self._lock:
            return self._latest


def apply_command(mode: ControllerMode, cmd: TeleopCommand) -> ControllerMode:
    """Advance the mode machine one step (Idle<->Standing<->Walking)."""
    if not cmd.start:
        return ControllerMode.IDLE
    if mode is ControllerMode.IDLE:
        return ControllerMode.STANDING
    if cmd.walk:
        return ControllerMode.WALKING
    return ControllerMode.STANDING


def _slew(current: float, target: float, max_step: float) -> float:
    delta = target - current
    if abs(delta) <= max_step:
        return target
    return current + math.copysign(max_step, delta)


def smooth_command(
    prev: TeleopCommand, nxt: TeleopCommand, dt: float, rates: SlewRates = SlewRates()
) -> TeleopCommand:
    """Slew every numeric field of the command toward its target at the
    per-field maximum rate; toggles and enums pass through."""
    return replace(
        nxt,
        height=_slew(prev.height, nxt.height, rates.height * dt),
        swing_height=_slew(prev.swing_height, nxt.swing_height, rates.height * dt),
        stance_depth=_slew(prev.stance_depth, nxt.stance_depth, rates.height * dt),
        roll=_slew(prev.roll, nxt.roll, rates.angles * dt),
        pitch=_slew(prev.pitch, nxt.pitch, rates.angles * dt),
        yaw=_slew(prev.yaw, nxt.yaw, rates.angles * dt),
        step_length_x=_slew(prev.step_length_x, nxt.step_length_x, rates.steps * dt),
        step_length_y=_slew(prev.step_length_y, nxt.step_length_y, rates.steps * dt),
    )


def clamp_command(cmd: TeleopCommand, table: Dict[str, Tuple[float, float]]) -> TeleopCommand:
    """Clamp numeric fields into the config's bounds; never rejects."""
    clamped = {}
    for name, (lo, hi) in table.items():
        clamped[name] = min(hi, max(lo, getattr(cmd, name)))
    return replace(cmd, **clamped)


class Controller:
    """Owns the gait clock, the effective (slewed) command, and per-leg
    fallback angles. One writer (the tick loop) mutates it."""

    def __init__(self, config: Optional[Config] = None):
        self._config: Optional[Config] = None
        if config is not None:
            self.configure(config)

    def configure(self, config: Config) -> None:
        self._config = config
        self._geom = config.leg_geometry()
        self._mounts = config.hip_mounts()
        self._clamps = config.clamp_table()
        self._rates = SlewRates(
            height=config.controller.slew_height,
            angles=math.radians(config.controller.slew_angles_deg),
            steps=config.controller.slew_steps,
        )
        self._max_joint_rate = config.servo.max_speed
        self._neutral_feet = neutral_world_feet(self._geom, self._mounts)
        self.reset()

    def reset(self) -> None:
        if self._config is None:
            raise NotInitialized("controller has no configuration")
        cfg = self._config
        self.mode = ControllerMode.IDLE
        self.phase = 0.0
        self.tick_index = 0
        self.time = 0.0
        self.effective = TeleopCommand(
            height=cfg.body.sit_height, cycle_period=cfg.gait.trot_period
        )
        self._height_rate = self._rates.height
        self.last_plan: Optional[FootPlan] = None
        self.planned_world_feet: Dict[LegId, FootTarget] = dict(self._neutral_feet)
        self.last_pose = BodyPose(height=cfg.body.sit_height)
        self._angles: Dict[LegId, JointAngles] = {}
        for leg in LEG_ORDER:
            target = leg_targets_for_pose(self.last_pose, self._neutral_feet, self._mounts)[leg]
            self._angles[leg] = leg_ik(target, self._geom, leg)

    # -- per-tick pipeline -------------------------------------------------

    def _shape_target(self, cmd: TeleopCommand, mode: ControllerMode) -> TeleopCommand:
        """Mode-dependent target for the effective command."""
        cfg = self._config
        if mode is ControllerMode.IDLE:
            shaped = replace(
                cmd,
                height=cfg.body.sit_height,
                step_length_x=0.0,
                step_length_y=0.0,
                swing_height=0.0,
                stance_depth=0.0,
                roll=0.0,
                pitch=0.0,
                yaw=0.0,
            )
        elif mode is ControllerMode.STANDING:
            shaped = replace(
                cmd, step_length_x=0.0, step_length_y=0.0, swing_height=0.0, stance_depth=0.0
            )
        else:
            shaped = cmd
        if cmd.pattern is not self.effective.pattern or cmd.side_walk_mode is not self.effective.side_walk_mode:
            # latch pattern changes through a neutral plan
            shaped = replace(
                shaped, step_length_x=0.0, step_length_y=0.0, swing_height=0.0, stance_depth=0.0
            )
        return shaped

    def _plan_is_neutral(self) -> bool:
        e = self.effective
        return (
            abs(e.step_length_x) < NEUTRAL_EPS
            and abs(e.step_length_y) < NEUTRAL_EPS
            and e.swing_height < NEUTRAL_EPS
            and e.stance_depth < NEUTRAL_EPS
        )

    def control_tick(self, cmd: Optional[TeleopCommand], dt: float) -> JointCommandFrame:
        """Run one pipeline tick; cmd may be None to reuse the previous one."""
        if self._config is None:
            raise NotInitialized("controller has no configuration")
        if dt <= 0:
            raise ValueError("dt must be positive")
        cfg = self._config

        incoming = clamp_command(cmd, self._clamps) if cmd is not None else self._last_incoming()
        prev_mode = self.mode
        self.mode = apply_command(prev_mode, incoming)
        self._incoming = incoming

        target = self._shape_target(incoming, self.mode)
        if self.mode is not prev_mode and target.height != self.effective.height:
            # fixed-duration stand/sit ramp
            self._height_rate = abs(target.height - self.effective.height) / cfg.controller.stand_ramp_s
        rates = replace(self._rates, height=self._height_rate)
        old_pattern = self.effective.pattern
        old_side_mode = self.effective.side_walk_mode
        self.effective = smooth_command(self.effective, target, dt, rates)
        # enums stay latched until the plan is neutral
        self.effective = replace(self.effective, pattern=old_pattern, side_walk_mode=old_side_mode)
        if self.effective.height == target.height:
            self._height_rate = self._rates.height
        if self._plan_is_neutral():
            # safe instants: adopt latched pattern switches, re-zero the clock
            if (
                incoming.pattern is not self.effective.pattern
                or incoming.side_walk_mode is not self.effective.side_walk_mode
            ):
                self.effective = replace(
                    self.effective, pattern=incoming.pattern, side_walk_mode=incoming.side_walk_mode
                )
                self.phase = 0.0
            if self.mode is not ControllerMode.WALKING:
                self.phase = 0.0

        if self.mode is ControllerMode.WALKING:
            self.phase = (self.phase + dt / self.effective.cycle_period) % 1.0

        gait_cmd = self.effective.gait_command()
        if self.mode is ControllerMode.WALKING:
            foot_plan = plan(self.phase, gait_cmd, self._mounts, cfg.body.max_lean)
        else:
            foot_plan = FootPlan(
                {leg: (0.0, 0.0, 0.0) for leg in LEG_ORDER},
                {leg: True for leg in LEG_ORDER},
                0.0,
            )
        self.last_plan = foot_plan

        pose = BodyPose(
            height=self.effective.height,
            roll=self.effective.roll,
            pitch=self.effective.pitch,
            yaw=self.effective.yaw,
            lateral_shift=foot_plan.lateral_shift,
        )
        self.last_pose = pose
        world_feet = {}
        for leg in LEG_ORDER:
            nx, ny, nz = self._neutral_feet[leg]
            dx, dy, dz = foot_plan.displacements[leg]
            world_feet[leg] = FootTarget(nx + dx, ny + dy, nz + dz)
        self.planned_world_feet = world_feet
        targets = leg_targets_for_pose(pose, world_feet, self._mounts)

        diagnostics: List[str] = []
        joints: List[float] = []
        joint_step = self._max_joint_rate * dt
        for leg in LEG_ORDER:
            prev = self._angles[leg]
            try:
                solved = leg_ik(targets[leg], self._geom, leg)
            except KinematicsError as err:
                # hold the previous angles, never halt the loop
                solved = prev
                diagnostics.append(f"{leg.name}: {err}")
            # output shaping: never command faster than the servos can track
            self._angles[leg] = JointAngles(
                *(_slew(p, s, joint_step) for p, s in zip(prev, solved))
            )
            joints.extend(self._angles[leg])

        frame = JointCommandFrame(
            tick=self.tick_index,
            time=self.time,
            joints=tuple(joints),
            diagnostics=tuple(diagnostics),
        )
        self.tick_index += 1
        self.time += dt
        return frame

    def _last_incoming(self) -> TeleopCommand:
        return getattr(self, "_incoming", TeleopCommand())
