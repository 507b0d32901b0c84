#!/usr/bin/env python3
"""Tour of the leg kinematics: FK, IK, reachability, and the workspace.

Run from the repo root:  python demos/01_leg_kinematics.py
Writes demos/output/workspace.png with a side-view slice of the reachable
workspace of the front-left leg.
"""

import math
import random
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from quadsim.kinematics import (
    KNEE_SHANK_DOWN,
    FootTarget,
    JointAngles,
    LegGeometry,
    LegId,
    leg_fk,
    leg_ik,
    reachable,
)

geom = LegGeometry()
print("stock leg:", geom.l_hip, geom.l_upper, geom.l_lower, "m links")

# The straight leg hangs 0.300 m below the hip, offset sideways by the hip link.
straight = JointAngles(0.0, 0.0, KNEE_SHANK_DOWN)
print("straight leg FK:", leg_fk(straight, geom, LegId.FL))

# Invert a standing posture and go back through FK.
target = FootTarget(0.0, 0.104, -0.17)
angles = leg_ik(target, geom, LegId.FL)
print("standing IK (deg):", [round(math.degrees(a), 2) for a in angles])
print("round trip error:", math.dist(leg_fk(angles, geom, LegId.FL), target), "m")

# Reachability: the leg folds to about 78 mm and stretches to 300 mm.
for z in (-0.300, -0.240, -0.080, -0.050):
    ok = reachable(FootTarget(0.0, 0.104, z), geom, LegId.FL)
    print(f"  foot at z={z:+.3f} m under the hip: {'reachable' if ok else 'unreachable'}")

# Sample the joint box through FK for a side-view (x, z) workspace slice.
rng = random.Random(0)
xs, zs = [], []
for _ in range(20000):
    ang = JointAngles(
        0.0,
        rng.uniform(*geom.upper_limits),
        rng.uniform(*geom.lower_limits),
    )
    foot = leg_fk(ang, geom, LegId.FL)
    xs.append(foot.x)
    zs.append(foot.z)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig, ax = plt.subplots(figsize=(6, 6))
ax.scatter(xs, zs, s=1, alpha=0.2, label="reachable (hip roll = 0)")
ax.scatter([0], [0], marker="s", color="k", label="hip")
ax.scatter([0], [-0.17], marker="*", color="r", s=120, label="standing foot")
ax.set_xlabel("x forward [m]")
ax.set_ylabel("z up [m]")
ax.set_aspect("equal")
ax.legend(loc="upper right")
ax.set_title("leg-plane workspace slice")
fig.savefig(out / "workspace.png", dpi=120)
print("wrote", out / "workspace.png")
