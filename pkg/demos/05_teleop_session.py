#!/usr/bin/env python3
"""Scripted teleop session against a live server over the wire protocol.

Starts the WebSocket service in-process on an ephemeral port, connects a
client, drives the robot through stand / trot / stop, and prints the state
stream it gets back. This is exactly what the browser UI does.
"""

import asyncio

from websockets.asyncio.client import connect

from quadsim.config import load_config
from quadsim.protocol import CmdMsg, PingMsg, decode, encode
from quadsim.server import TeleopServer


async def main():
    server = TeleopServer(load_config(), port=0)
    run_task = asyncio.create_task(server.run())
    await server.wait_started()
    url = f"ws://127.0.0.1:{server.bound_port}"
    print("server on", url)

    async with connect(url) as ws:
        await ws.send(encode(PingMsg(seq=0)))
        seq = 1

        async def command(label, **fields):
            nonlocal seq
            await ws.send(encode(CmdMsg(seq=seq, **fields)))
            seq += 1
            print(f"\n>> {label}")

        async def watch(seconds):
            deadline = asyncio.get_event_loop().time() + seconds
            while asyncio.get_event_loop().time() < deadline:
                msg = decode(await ws.recv())
                if type(msg).__name__ != "StateMsg":
                    print("  <-", msg)
                    continue
                x, y, _ = msg.odometry
                margin = "----" if msg.com_margin is None else f"{msg.com_margin:.3f}"
                print(
                    f"  t={msg.time:6.2f} {msg.mode:8s} feet_down={sum(msg.stance)} "
                    f"pos=({x:+.2f},{y:+.2f}) margin={margin}",
                    end="\r",
                )
            print()

        await command("stand up", start=True, height=0.17)
        await watch(2.0)
        await command(
            "trot forward",
            start=True,
            walk=True,
            step_length_x=0.05,
            swing_height=0.04,
            cycle_period=0.8,
            height=0.17,
        )
        await watch(4.0)
        await command("sit down", start=False)
        await watch(1.5)

    server.stop()
    await run_task
    print("session over")


if __name__ == "__main__":
    asyncio.run(main())
