"""Headless scenario execution with CSV telemetry.

A scenario is an ordered list of (time, command) keyframes plus a duration.
Each keyframe is a complete command (absolute, not a delta); it stays in
force until the next keyframe's time. Replaying the same scenario writes a
byte-identical CSV.

CSV columns, in order (header row mandatory):
time, cmd_<leg>_<joint> x12, sim_<leg>_<joint> x12, odom_x, odom_y,
odom_heading, stance_<leg> x4, com_margin (empty when undefined).
Legs are ordered FL, FR, BL, BR; joints hip, upper, lower. Floats are
written with 9 decimal places; stance flags as 0/1.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import List, Optional, Tuple, Union

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from quadsim.config import Config, ParseError, ValidationError
from quadsim.controller import Controller, TeleopCommand
from quadsim.gait import GaitPattern, SideWalkMode
from quadsim.kinematics import LEG_ORDER
from quadsim.simulator import Simulator

JOINT_NAMES = [f"{leg.name.lower()}_{joint}" for leg in LEG_ORDER for joint in ("hip", "upper", "lower")]
CSV_COLUMNS = (
    ["time"]
    + [f"cmd_{name}" for name in JOINT_NAMES]
    + [f"sim_{name}" for name in JOINT_NAMES]
    + ["odom_x", "odom_y", "odom_heading"]
    + [f"stance_{leg.name.lower()}" for leg in LEG_ORDER]
    + ["com_margin"]
)


@dataclass(frozen=True)
class Scenario:
    """Keyframed command trace: times strictly increasing, duration covers
    the last keyframe."""

    keyframes: Tuple[Tuple[float, TeleopCommand], ...]
    duration: float

    def __post_init__(self):
        times = [t for t, _ in self.keyframes]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationError("scenario keyframe times must be strictly increasing")
        if times and self.duration < times[-1]:
            raise ValidationError("scenario duration must cover the last keyframe")
        if self.duration <= 0:
            raise ValidationError("scenario duration must be positive")

    def command_at(self, t: float) -> TeleopCommand:
        current = TeleopCommand()
        for time, cmd in self.keyframes:
            if time <= t:
                current = cmd
            else:
                break
        return current


_COMMAND_FIELDS = {f.name for f in fields(TeleopCommand)}


def _keyframe_command(raw: dict, index: int) -> Tuple[float, TeleopCommand]:
    if "time" not in raw:
        raise ValidationError(f"keyframe {index} is missing 'time'")
    data = dict(raw)
    t = data.pop("time")
    unknown = set(data) - _COMMAND_FIELDS
    if unknown:
        raise ValidationError(f"keyframe {index}: unknown field '{sorted(unknown)[0]}'")
    if "pattern" in data:
        try:
            data["pattern"] = GaitPattern(data["pattern"])
        except ValueError as err:
            raise ValidationError(f"keyframe {index}: {err}") from err
    if "side_walk_mode" in data:
        try:
            data["side_walk_mode"] = SideWalkMode(data["side_walk_mode"])
        except ValueError as err:
            raise ValidationError(f"keyframe {index}: {err}") from err
    try:
        return float(t), TeleopCommand(**data)
    except TypeError as err:
        raise ValidationError(f"keyframe {index}: {err}") from err


def load_scenario(path: Union[str, Path]) -> Scenario:
    path = Path(path)
    try:
        data = tomllib.loads(path.read_bytes().decode("utf-8"))
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err}") from err
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as err:
        raise ParseError(f"{path}: {err}") from err
    unknown = set(data) - {"duration", "keyframes"}
    if unknown:
        raise ValidationError(f"scenario: unknown key '{sorted(unknown)[0]}'")
    if "duration" not in data:
        raise ValidationError("scenario is missing 'duration'")
    raw_frames = data.get("keyframes", [])
    keyframes = tuple(_keyframe_command(kf, i) for i, kf in enumerate(raw_frames))
    return Scenario(keyframes=keyframes, duration=float(data["duration"]))


@dataclass(frozen=True)
class ScenarioSummary:
    ticks: int
    distance_traveled: float
    min_com_margin: Optional[float]
    min_stance_feet: int
    ik_failures: int


def _fmt(value: float) -> str:
    return format(value, ".9f")


def run_scenario(
    config: Config, scenario: Scenario, out_path: Optional[Union[str, Path]] = None
) -> ScenarioSummary:
    """Run the closed loop headless, optionally recording per-tick CSV."""
    dt = config.sim.dt
    controller = Controller(config)
    simulator = Simulator(config)
    ticks = int(round(scenario.duration / dt))

    rows: List[str] = [",".join(CSV_COLUMNS)]
    min_margin: Optional[float] = None
    min_stance = 4
    ik_failures = 0
    for i in range(ticks):
        t = i * dt
        frame = controller.control_tick(scenario.command_at(t), dt)
        state = simulator.step(frame, dt)
        ik_failures += len(frame.diagnostics)
        min_stance = min(min_stance, sum(state.stance))
        if state.com_margin is not None:
            min_margin = state.com_margin if min_margin is None else min(min_margin, state.com_margin)
        row = [_fmt(state.time)]
        row += [_fmt(v) for v in frame.joints]
        row += [_fmt(v) for v in state.joints]
        row += [_fmt(v) for v in state.odometry]
        row += ["1" if s else "0" for s in state.stance]
        row += [_fmt(state.com_margin) if state.com_margin is not None else ""]
        rows.append(",".join(row))

    if out_path is not None:
        Path(out_path).write_bytes(("\n".join(rows) + "\n").encode("utf-8"))

    x, y, _ = simulator.state.odometry
    return ScenarioSummary(
        ticks=ticks,
        distance_traveled=(x * x + y * y) ** 0.5,
        min_com_margin=min_margin,
        min_stance_feet=min_stance,
        ik_failures=ik_failures,
    )
