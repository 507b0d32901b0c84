"""Desk-scale quadruped locomotion stack.

Analytical leg IK, whole-body orientation control, trot/walk gait
generation, a kinematic digital twin, and a JSON-over-WebSocket teleop
protocol, usable as a library or through the ``quadsim`` CLI.
"""

from quadsim.config import Config, load_config
from quadsim.controller import Controller, ControllerMode, TeleopCommand
from quadsim.gait import FootPlan, GaitCommand, GaitPattern, com_margin, plan
from quadsim.kinematics import (
    BodyPose,
    FootTarget,
    HipMounts,
    JointAngles,
    LegGeometry,
    LegId,
    body_ik,
    body_rotation,
    leg_fk,
    leg_ik,
    reachable,
)
from quadsim.scenario import Scenario, load_scenario, run_scenario
from quadsim.simulator import RobotState, Simulator

__all__ = [
    "BodyPose",
    "Config",
    "Controller",
    "ControllerMode",
    "FootPlan",
    "FootTarget",
    "GaitCommand",
    "GaitPattern",
    "HipMounts",
    "JointAngles",
    "LegGeometry",
    "LegId",
    "RobotState",
    "Scenario",
    "Simulator",
    "TeleopCommand",
    "body_ik",
    "body_rotation",
    "com_margin",
    "leg_fk",
    "leg_ik",
    "load_config",
    "load_scenario",
    "plan",
    "reachable",
    "run_scenario",
]

__version__ = "0.1.0"
