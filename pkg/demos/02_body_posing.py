#!/usr/bin/env python3
"""Whole-body posing: fixed feet, moving body.

Shows how hip-frame foot targets change with body height, roll, pitch, and
yaw while the world foot positions stay put, and where feasibility ends.
"""

import math

import numpy as np

from quadsim.kinematics import (
    BodyPose,
    BodyPoseInfeasible,
    HipMounts,
    LegGeometry,
    LegId,
    body_ik,
    body_rotation,
    leg_fk,
    leg_ik,
    leg_targets_for_pose,
    neutral_world_feet,
)

geom, mounts = LegGeometry(), HipMounts()
feet = neutral_world_feet(geom, mounts)
print("neutral world feet:")
for leg, f in feet.items():
    print(f"  {leg.name}: ({f.x:+.3f}, {f.y:+.3f}, {f.z:+.3f})")

# Crouch-to-tall sweep: all four targets stay solvable across the whole
# published height range.
for h in (0.080, 0.120, 0.170, 0.240):
    targets = body_ik(BodyPose(height=h), feet, mounts, geom)
    knee = math.degrees(leg_ik(targets[LegId.FL], geom, LegId.FL).lower)
    print(f"height {h:.3f} m -> FL knee at {knee:6.2f} deg")

# Pure yaw: feet do not move in the world even though every hip target does.
pose = BodyPose(height=0.17, yaw=math.radians(15))
targets = leg_targets_for_pose(pose, feet, mounts)
rot = body_rotation(pose)
worst = 0.0
for leg in LegId:
    solved = leg_ik(targets[leg], geom, leg)
    foot_world = rot @ (np.array(leg_fk(solved, geom, leg)) + np.array(mounts.offset(leg)))
    foot_world += [0.0, pose.lateral_shift, pose.height]
    worst = max(worst, float(np.linalg.norm(foot_world - np.array(feet[leg]))))
print(f"yaw 15 deg: worst world-foot drift {worst:.2e} m (paws pinned)")

# Roll feasibility boundary at two heights.
for h in (0.20, 0.24):
    deg = 0.0
    while True:
        try:
            body_ik(BodyPose(height=h, roll=math.radians(deg)), feet, mounts, geom)
            deg += 0.5
        except BodyPoseInfeasible as err:
            legs = ", ".join(leg.name for leg in err.failures)
            print(f"height {h:.2f} m: roll becomes infeasible at {deg:.1f} deg ({legs})")
            break
