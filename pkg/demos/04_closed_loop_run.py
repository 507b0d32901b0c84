#!/usr/bin/env python3
"""Closed-loop run: controller -> simulator, tick by tick.

Stands the robot up, trots it forward, steers it through a turn, and plots
the resulting odometry trail and joint trajectories into
demos/output/closed_loop.png.
"""

from dataclasses import replace
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from quadsim.config import load_config
from quadsim.controller import Controller, TeleopCommand
from quadsim.gait import SideWalkMode
from quadsim.simulator import Simulator

cfg = load_config()
dt = cfg.sim.dt
ctrl, sim = Controller(cfg), Simulator(cfg)

stand = TeleopCommand(start=True, height=0.17)
trot = replace(stand, walk=True, step_length_x=0.05, swing_height=0.04, cycle_period=0.8)
turn = replace(trot, side_walk_mode=SideWalkMode.ROTATION, step_length_y=0.03)

script = [(stand, 2.0), (trot, 4.0), (turn, 4.0), (stand, 1.0)]
trail, knees, times = [], [], []
for cmd, seconds in script:
    for _ in range(int(seconds / dt)):
        frame = ctrl.control_tick(cmd, dt)
        state = sim.step(frame, dt)
        trail.append(state.odometry)
        knees.append(state.joints[2])  # FL knee
        times.append(state.time)
    x, y, heading = sim.state.odometry
    print(
        f"t={sim.state.time:5.2f}s mode={ctrl.mode.value:8s} "
        f"pos=({x:+.3f},{y:+.3f}) heading={heading:+.3f} rad"
    )

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 5))
ax1.plot([p[0] for p in trail], [p[1] for p in trail])
ax1.set_xlabel("x [m]")
ax1.set_ylabel("y [m]")
ax1.set_title("odometry trail")
ax1.set_aspect("equal")
ax2.plot(times, knees)
ax2.set_xlabel("time [s]")
ax2.set_ylabel("FL knee [rad]")
ax2.set_title("knee trajectory")
fig.savefig(out / "closed_loop.png", dpi=120)
print("wrote", out / "closed_loop.png")
