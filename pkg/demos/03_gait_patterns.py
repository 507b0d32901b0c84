#!/usr/bin/env python3
"""Gait anatomy: stance timelines, swing profiles, lean, and stability.

Prints ASCII stance charts for both gaits and writes
demos/output/gaits.png with the swing trajectory, the walk's lateral lean,
and the static stability margin over one cycle.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from quadsim.gait import (
    GaitCommand,
    GaitPattern,
    com_margin,
    plan,
    swing_displacement,
    walk_lean,
)
from quadsim.kinematics import HipMounts, LegGeometry, LegId, neutral_world_feet

mounts = HipMounts()
feet0 = neutral_world_feet(LegGeometry(), mounts)

TROT = GaitCommand(GaitPattern.TROT, step_length_x=0.06, swing_height=0.04, cycle_period=0.8)
WALK = GaitCommand(GaitPattern.WALK, step_length_x=0.04, swing_height=0.04, cycle_period=1.6)

for cmd in (TROT, WALK):
    print(f"\n{cmd.pattern.value} stance chart (60 phase columns, '#'=stance '.'=swing):")
    for leg in LegId:
        row = "".join(
            "#" if plan(i / 60, cmd, mounts).stance[leg] else "." for i in range(60)
        )
        print(f"  {leg.name}: {row}")

phases = [i / 400 for i in range(401)]
lift = [swing_displacement(p % 1.0, TROT)[2] for p in phases]
lean = [walk_lean(p, 0.03) for p in phases]
margins = []
for p in phases:
    fp = plan(p % 1.0, WALK, mounts)
    stance_xy = [
        (feet0[l].x + fp.displacements[l][0], feet0[l].y + fp.displacements[l][1])
        for l in LegId
        if fp.stance[l]
    ]
    margins.append(com_margin(stance_xy, (0.0, fp.lateral_shift)))

print(f"\nwalk margin over one cycle: min {min(margins)*1000:.2f} mm, max {max(margins)*1000:.1f} mm")

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig, axes = plt.subplots(3, 1, figsize=(8, 9), sharex=True)
axes[0].plot(phases, lift)
axes[0].set_ylabel("swing lift [m]")
axes[1].plot(phases, lean)
axes[1].set_ylabel("walk lean [m]")
axes[2].plot(phases, margins)
axes[2].axhline(0, color="r", lw=0.8)
axes[2].set_ylabel("stability margin [m]")
axes[2].set_xlabel("gait phase")
fig.suptitle("swing profile, walk lean, and static margin")
fig.savefig(out / "gaits.png", dpi=120)
print("wrote", out / "gaits.png")
