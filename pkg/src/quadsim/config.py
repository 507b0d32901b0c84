"""Configuration loading and validation.

The config file is TOML. Every field has a default (the stock robot
profile), unknown keys are rejected, and validation errors always name the
offending field. The numeric teleop bounds derived here form the clamp
table that both the server and the browser UI enforce; the canonical copy
of the default table ships in shared/clamps.json.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

try:
    import tomllib  # Python 3.11+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from quadsim.kinematics import HipMounts, LegGeometry


class ConfigError(Exception):
    """Base class for configuration failures."""


class ParseError(ConfigError):
    """The file is not valid TOML."""


class ValidationError(ConfigError):
    """A parsed value violates an invariant; the message names the field."""


@dataclass(frozen=True)
class GeometrySection:
    hip_link: float = 0.104
    upper_link: float = 0.150
    lower_link: float = 0.150
    hip_limits_deg: Tuple[float, float] = (-90.0, 90.0)
    upper_limits_deg: Tuple[float, float] = (-70.0, 170.0)
    lower_limits_deg: Tuple[float, float] = (30.0, 130.0)


@dataclass(frozen=True)
class MountSection:
    x: float = 0.120
    y: float = 0.055
    z: float = 0.0


@dataclass(frozen=True)
class BodySection:
    default_height: float = 0.17
    sit_height: float = 0.10
    min_height: float = 0.08
    max_height: float = 0.24
    max_tilt_deg: float = 25.0
    max_lean: float = 0.03


@dataclass(frozen=True)
class GaitSection:
    max_step_x: float = 0.10
    max_step_y: float = 0.06
    max_swing_height: float = 0.08
    max_stance_depth: float = 0.02
    min_cycle_period: float = 0.2
    max_cycle_period: float = 5.0
    trot_period: float = 0.8
    walk_period: float = 1.6


@dataclass(frozen=True)
class ControllerSection:
    rate_hz: float = 100.0
    stand_ramp_s: float = 1.0
    slew_height: float = 0.2   # m/s, body and step heights
    slew_angles_deg: float = 90.0  # deg/s, body orientation
    slew_steps: float = 0.1    # m/s, step length parameters


@dataclass(frozen=True)
class ServoSection:
    max_speed: float = 7.0   # rad/s
    max_torque: float = 7.0  # N*m, recorded but not simulated


@dataclass(frozen=True)
class SimSection:
    dt: float = 0.01
    contact_epsilon: float = 1e-4


@dataclass(frozen=True)
class ServerSection:
    port: int = 8765
    state_rate_hz: float = 30.0


@dataclass(frozen=True)
class DamperSection:
    # Lower-leg spring damper constants, carried for future use; the
    # kinematic twin does not deflect.
    threshold_n: float = 148.0
    displacement_ratio_mm_per_n: float = 0.1
    max_displacement_mm: float = 10.0


@dataclass(frozen=True)
class Config:
    geometry: GeometrySection = field(default_factory=GeometrySection)
    mounts: MountSection = field(default_factory=MountSection)
    body: BodySection = field(default_factory=BodySection)
    gait: GaitSection = field(default_factory=GaitSection)
    controller: ControllerSection = field(default_factory=ControllerSection)
    servo: ServoSection = field(default_factory=ServoSection)
    sim: SimSection = field(default_factory=SimSection)
    server: ServerSection = field(default_factory=ServerSection)
    damper: DamperSection = field(default_factory=DamperSection)

    def leg_geometry(self) -> LegGeometry:
        g = self.geometry
        return LegGeometry(
            l_hip=g.hip_link,
            l_upper=g.upper_link,
            l_lower=g.lower_link,
            hip_limits=tuple(math.radians(v) for v in g.hip_limits_deg),
            upper_limits=tuple(math.radians(v) for v in g.upper_limits_deg),
            lower_limits=tuple(math.radians(v) for v in g.lower_limits_deg),
        )

    def hip_mounts(self) -> HipMounts:
        return HipMounts(self.mounts.x, self.mounts.y, self.mounts.z)

    def clamp_table(self) -> Dict[str, Tuple[float, float]]:
        """Numeric teleop field bounds, shared verbatim with the UI."""
        tilt = math.radians(self.body.max_tilt_deg)
        return {
            "step_length_x": (-self.gait.max_step_x, self.gait.max_step_x),
            "step_length_y": (-self.gait.max_step_y, self.gait.max_step_y),
            "swing_height": (0.0, self.gait.max_swing_height),
            "stance_depth": (0.0, self.gait.max_stance_depth),
            "cycle_period": (self.gait.min_cycle_period, self.gait.max_cycle_period),
            "height": (self.body.min_height, self.body.max_height),
            "roll": (-tilt, tilt),
            "pitch": (-tilt, tilt),
            "yaw": (-tilt, tilt),
        }


_SECTIONS = {f.name: f.default_factory for f in fields(Config)}  # type: ignore[misc]


def _build_section(name: str, section_cls, data: Dict[str, Any]):
    defaults = section_cls()
    known = {f.name for f in fields(section_cls)}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown key '{name}.{sorted(unknown)[0]}'")
    kwargs = {}
    for key, value in data.items():
        default = getattr(defaults, key)
        if isinstance(default, tuple):
            if not (isinstance(value, list) and len(value) == 2):
                raise ValidationError(f"{name}.{key} must be a [lo, hi] pair")
            kwargs[key] = (float(value[0]), float(value[1]))
        elif isinstance(default, int) and isinstance(value, int):
            kwargs[key] = value
        elif isinstance(value, (int, float)) and not isinstance(value, bool):
            kwargs[key] = float(value)
        else:
            raise ValidationError(f"{name}.{key} must be a number")
    return section_cls(**kwargs)


def _positive(value: float, name: str):
    if not value > 0:
        raise ValidationError(f"{name} must be positive, got {value}")


def _validate(cfg: Config) -> Config:
    g = cfg.geometry
    for key in ("hip_link", "upper_link", "lower_link"):
        _positive(getattr(g, key), f"geometry.{key}")
    for key in ("hip_limits_deg", "upper_limits_deg", "lower_limits_deg"):
        lo, hi = getattr(g, key)
        if not lo < hi:
            raise ValidationError(f"geometry.{key} must satisfy lo < hi")

    b = cfg.body
    if not 0 < b.min_height < b.max_height:
        raise ValidationError("body.min_height must be within (0, body.max_height)")
    for key in ("default_height", "sit_height"):
        v = getattr(b, key)
        if not b.min_height <= v <= b.max_height:
            raise ValidationError(
                f"body.{key} must lie within [body.min_height, body.max_height]"
            )
    if b.max_tilt_deg <= 0 or b.max_tilt_deg > 90:
        raise ValidationError("body.max_tilt_deg must be in (0, 90]")
    if b.max_lean < 0:
        raise ValidationError("body.max_lean must be non-negative")

    ga = cfg.gait
    for key in ("max_step_x", "max_step_y", "max_swing_height"):
        _positive(getattr(ga, key), f"gait.{key}")
    if ga.max_stance_depth < 0:
        raise ValidationError("gait.max_stance_depth must be non-negative")
    for key in ("min_cycle_period", "max_cycle_period", "trot_period", "walk_period"):
        _positive(getattr(ga, key), f"gait.{key}")
    if not ga.min_cycle_period < ga.max_cycle_period:
        raise ValidationError("gait.min_cycle_period must be below gait.max_cycle_period")
    for key in ("trot_period", "walk_period"):
        v = getattr(ga, key)
        if not ga.min_cycle_period <= v <= ga.max_cycle_period:
            raise ValidationError(f"gait.{key} must lie within the cycle_period bounds")

    c = cfg.controller
    for key in ("rate_hz", "stand_ramp_s", "slew_height", "slew_angles_deg", "slew_steps"):
        _positive(getattr(c, key), f"controller.{key}")

    _positive(cfg.servo.max_speed, "servo.max_speed")
    _positive(cfg.servo.max_torque, "servo.max_torque")
    _positive(cfg.sim.dt, "sim.dt")
    _positive(cfg.sim.contact_epsilon, "sim.contact_epsilon")
    if abs(cfg.sim.dt * cfg.controller.rate_hz - 1.0) > 1e-9:
        raise ValidationError(
            "sim.dt must equal 1 / controller.rate_hz "
            f"(got dt={cfg.sim.dt}, rate_hz={cfg.controller.rate_hz})"
        )
    if not 0 < cfg.server.port < 65536:
        raise ValidationError("server.port must be in (0, 65536)")
    _positive(cfg.server.state_rate_hz, "server.state_rate_hz")
    return cfg


def config_from_dict(data: Dict[str, Any]) -> Config:
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ValidationError(f"unknown section '{sorted(unknown)[0]}'")
    sections = {}
    for name, section_cls in _SECTIONS.items():
        raw = data.get(name, {})
        if not isinstance(raw, dict):
            raise ValidationError(f"section '{name}' must be a table")
        sections[name] = _build_section(name, section_cls, raw)
    return _validate(Config(**sections))


def load_config(path: Optional[Union[str, Path]] = None) -> Config:
    """Load and validate a TOML config; with no path, return the defaults."""
    if path is None:
        return _validate(Config())
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err}") from err
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as err:
        raise ParseError(f"{path}: {err}") from err
    return config_from_dict(data)
