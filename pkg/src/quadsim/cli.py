"""Command-line entry points.

    quadsim serve --config config/default.toml --port 8765
    quadsim run --config config/default.toml --scenario scenarios/walk.toml --out walk.csv
    quadsim check-config config/default.toml
    quadsim ik --x 0.0 --y 0.104 --z -0.17 --leg FL
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Optional, Sequence

from quadsim.config import ConfigError, load_config
from quadsim.kinematics import FootTarget, KinematicsError, LegId, leg_ik
from quadsim.scenario import load_scenario, run_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadsim", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the live teleop WebSocket service")
    p_serve.add_argument("--config", default=None, help="TOML config path (defaults built in)")
    p_serve.add_argument("--port", type=int, default=None, help="override the config's port")

    p_run = sub.add_parser("run", help="run a scenario headless and record CSV telemetry")
    p_run.add_argument("--config", default=None)
    p_run.add_argument("--scenario", required=True)
    p_run.add_argument("--out", required=True, help="CSV output path")

    p_check = sub.add_parser("check-config", help="validate a config file")
    p_check.add_argument("path")

    p_ik = sub.add_parser("ik", help="one-shot leg IK probe")
    p_ik.add_argument("--x", type=float, required=True)
    p_ik.add_argument("--y", type=float, required=True)
    p_ik.add_argument("--z", type=float, required=True)
    p_ik.add_argument("--leg", choices=[leg.name for leg in LegId], default="FL")
    p_ik.add_argument("--config", default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "check-config":
        try:
            cfg = load_config(args.path)
        except ConfigError as err:
            print(f"invalid: {err}", file=sys.stderr)
            return 1
        geom = cfg.leg_geometry()
        print(f"ok: links {geom.l_hip}/{geom.l_upper}/{geom.l_lower} m, "
              f"rate {cfg.controller.rate_hz:g} Hz, port {cfg.server.port}")
        return 0

    try:
        cfg = load_config(args.config)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1

    if args.command == "serve":
        from quadsim.server import serve

        serve(cfg, args.port)
        return 0

    if args.command == "run":
        try:
            scenario = load_scenario(args.scenario)
        except ConfigError as err:
            print(f"scenario error: {err}", file=sys.stderr)
            return 1
        summary = run_scenario(cfg, scenario, args.out)
        margin = "n/a" if summary.min_com_margin is None else f"{summary.min_com_margin:.4f} m"
        print(
            f"{summary.ticks} ticks, traveled {summary.distance_traveled:.3f} m, "
            f"min margin {margin}, ik failures {summary.ik_failures}"
        )
        return 0

    if args.command == "ik":
        target = FootTarget(args.x, args.y, args.z)
        leg = LegId[args.leg]
        try:
            sol = leg_ik(target, cfg.leg_geometry(), leg)
        except KinematicsError as err:
            print(f"{type(err).__name__}: {err}", file=sys.stderr)
            return 1
        print(f"hip   {sol.hip:+.6f} rad  ({math.degrees(sol.hip):+8.3f} deg)")
        print(f"upper {sol.upper:+.6f} rad  ({math.degrees(sol.upper):+8.3f} deg)")
        print(f"lower {sol.lower:+.6f} rad  ({math.degrees(sol.lower):+8.3f} deg)")
        return 0

    return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
