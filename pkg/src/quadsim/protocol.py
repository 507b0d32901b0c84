"""Versioned JSON wire protocol.

One JSON document per WebSocket text frame (the transport's framing is the
length delimiter). Every message carries the protocol version and a
monotone per-sender sequence number. Field names are snake_case, angles
radians, lengths meters. decode() is strict: unknown types, missing or
mistyped fields, or a version mismatch raise ProtocolError, which the
server answers with an error message before disconnecting that client.
"""

from __future__ import annotations

import json
import math
from dataclasses import MISSING, asdict, dataclass, fields
from typing import Any, Dict, Optional, Tuple, Union

from quadsim.controller import TeleopCommand
from quadsim.gait import GaitPattern, SideWalkMode

PROTOCOL_VERSION = "1"


class ProtocolError(Exception):
    """Malformed, mistyped, or version-incompatible message."""


@dataclass(frozen=True)
class CmdMsg:
    """Full teleop command; numeric fields are clamped server-side."""

    seq: int
    start: bool = False
    walk: bool = False
    pattern: str = "trot"
    step_length_x: float = 0.0
    step_length_y: float = 0.0
    swing_height: float = 0.0
    stance_depth: float = 0.0
    side_walk_mode: str = "linear"
    cycle_period: float = 0.8
    height: float = 0.17
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0
    timestamp: float = 0.0

    def to_command(self) -> TeleopCommand:
        try:
            pattern = GaitPattern(self.pattern)
            side_mode = SideWalkMode(self.side_walk_mode)
        except ValueError as err:
            raise ProtocolError(str(err)) from err
        return TeleopCommand(
            start=self.start,
            walk=self.walk,
            pattern=pattern,
            step_length_x=self.step_length_x,
            step_length_y=self.step_length_y,
            swing_height=self.swing_height,
            stance_depth=self.stance_depth,
            side_walk_mode=side_mode,
            cycle_period=self.cycle_period,
            height=self.height,
            roll=self.roll,
            pitch=self.pitch,
            yaw=self.yaw,
            timestamp=self.timestamp,
        )

    @classmethod
    def from_command(cls, seq: int, cmd: TeleopCommand) -> "CmdMsg":
        return cls(
            seq=seq,
            start=cmd.start,
            walk=cmd.walk,
            pattern=cmd.pattern.value,
            step_length_x=cmd.step_length_x,
            step_length_y=cmd.step_length_y,
            swing_height=cmd.swing_height,
            stance_depth=cmd.stance_depth,
            side_walk_mode=cmd.side_walk_mode.value,
            cycle_period=cmd.cycle_period,
            height=cmd.height,
            roll=cmd.roll,
            pitch=cmd.pitch,
            yaw=cmd.yaw,
            timestamp=cmd.timestamp,
        )


@dataclass(frozen=True)
class StateMsg:
    """Simulation snapshot broadcast to every client."""

    seq: int
    mode: str
    tick: int
    time: float
    phase: float
    joints_commanded: Tuple[float, ...]
    joints: Tuple[float, ...]
    odometry: Tuple[float, float, float]
    body_z: float
    feet: Tuple[Tuple[float, float, float], ...]
    stance: Tuple[bool, bool, bool, bool]
    com_margin: Optional[float]
    diagnostics: Tuple[str, ...] = ()


@dataclass(frozen=True)
class PingMsg:
    seq: int


@dataclass(frozen=True)
class PongMsg:
    seq: int
    echo: int


@dataclass(frozen=True)
class ErrMsg:
    seq: int
    message: str


WireMessage = Union[CmdMsg, StateMsg, PingMsg, PongMsg, ErrMsg]

_TYPE_TAGS = {
    CmdMsg: "cmd",
    StateMsg: "state",
    PingMsg: "ping",
    PongMsg: "pong",
    ErrMsg: "error",
}
_TAG_TYPES = {tag: cls for cls, tag in _TYPE_TAGS.items()}


def encode(msg: WireMessage) -> str:
    payload = asdict(msg)
    payload["type"] = _TYPE_TAGS[type(msg)]
    payload["version"] = PROTOCOL_VERSION
    return json.dumps(payload, separators=(",", ":"))


def _coerce(cls, name: str, annotation: str, value: Any):
    if annotation == "int":
        if not isinstance(value, int) or isinstance(value, bool):
            raise ProtocolError(f"{name} must be an integer")
        return value
    if annotation == "bool":
        if not isinstance(value, bool):
            raise ProtocolError(f"{name} must be a boolean")
        return value
    if annotation == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ProtocolError(f"{name} must be a number")
        if not math.isfinite(value):
            raise ProtocolError(f"{name} must be finite")
        return float(value)
    if annotation == "str":
        if not isinstance(value, str):
            raise ProtocolError(f"{name} must be a string")
        return value
    if annotation == "Optional[float]":
        if value is None:
            return None
        return _coerce(cls, name, "float", value)
    if annotation.startswith("Tuple"):
        if not isinstance(value, list):
            raise ProtocolError(f"{name} must be an array")
        if annotation == "Tuple[Tuple[float, float, float], ...]":
            return tuple(tuple(_coerce(cls, name, "float", v) for v in row) for row in value)
        if annotation == "Tuple[bool, bool, bool, bool]":
            return tuple(_coerce(cls, name, "bool", v) for v in value)
        if annotation == "Tuple[str, ...]":
            return tuple(_coerce(cls, name, "str", v) for v in value)
        return tuple(_coerce(cls, name, "float", v) for v in value)
    raise ProtocolError(f"unsupported field {name}")  # pragma: no cover


def decode(text: Union[str, bytes]) -> WireMessage:
    """Parse one wire message; strict about shape, types, and version."""
    try:
        payload = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as err:
        raise ProtocolError(f"invalid JSON: {err}") from err
    if not isinstance(payload, dict):
        raise ProtocolError("message must be a JSON object")
    version = payload.pop("version", None)
    if version != PROTOCOL_VERSION:
        raise ProtocolError(f"protocol version mismatch: got {version!r}, want {PROTOCOL_VERSION!r}")
    tag = payload.pop("type", None)
    cls = _TAG_TYPES.get(tag)
    if cls is None:
        raise ProtocolError(f"unknown message type {tag!r}")
    spec = {f.name: f for f in fields(cls)}
    unknown = set(payload) - set(spec)
    if unknown:
        raise ProtocolError(f"unknown field {sorted(unknown)[0]!r} for {tag}")
    kwargs: Dict[str, Any] = {}
    for name, f in spec.items():
        if name in payload:
            kwargs[name] = _coerce(cls, name, str(f.type), payload[name])
        elif f.default is MISSING:
            raise ProtocolError(f"missing field {name!r} for {tag}")
    return cls(**kwargs)
