"""Live teleop service: JSON wire protocol over WebSocket.

The control/simulation loop runs as a single task at the configured rate.
Client sessions run concurrently and touch the loop only through the
latest-wins command mailbox (ingress) and periodic state broadcasts
(egress), so any number of clients, including zero, never stall the loop.
A protocol violation disconnects only the offending client, after an error
message naming the problem.
"""

from __future__ import annotations

import asyncio
import logging
from typing import Optional, Set

import websockets
from websockets.asyncio.server import ServerConnection, serve as ws_serve

from quadsim.config import Config
from quadsim.controller import CommandMailbox, Controller
from quadsim.protocol import (
    CmdMsg,
    ErrMsg,
    PingMsg,
    PongMsg,
    ProtocolError,
    StateMsg,
    decode,
    encode,
)
from quadsim.simulator import Simulator

log = logging.getLogger(__name__)


class TeleopServer:
    """Owns the loop, the mailbox, and the client set."""

    def __init__(self, config: Config, port: Optional[int] = None):
        self.config = config
        self.port = port if port is not None else config.server.port
        self.controller = Controller(config)
        self.simulator = Simulator(config)
        self.mailbox = CommandMailbox()
        self.clients: Set[ServerConnection] = set()
        self._state_seq = 0
        self._started = asyncio.Event()
        self._stopping = asyncio.Event()

    # -- loop tasks ---------------------------------------------------------

    async def _control_loop(self) -> None:
        dt = self.config.sim.dt
        loop = asyncio.get_running_loop()
        next_deadline = loop.time()
        while not self._stopping.is_set():
            cmd = self.mailbox.latest()
            frame = self.controller.control_tick(cmd, dt)
            self.simulator.step(frame, dt)
            self._last_frame = frame
            next_deadline += dt
            delay = next_deadline - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)
            else:  # fell behind wall time; keep the simulated clock honest
                next_deadline = loop.time()
                await asyncio.sleep(0)

    def snapshot(self) -> StateMsg:
        self._state_seq += 1
        state = self.simulator.state
        frame = getattr(self, "_last_frame", None)
        return StateMsg(
            seq=self._state_seq,
            mode=self.controller.mode.value,
            tick=frame.tick if frame else 0,
            time=state.time,
            phase=self.controller.phase,
            joints_commanded=tuple(frame.joints) if frame else state.joints,
            joints=state.joints,
            odometry=state.odometry,
            body_z=state.body_z,
            feet=state.feet_world,
            stance=state.stance,
            com_margin=state.com_margin,
            diagnostics=state.diagnostics,
        )

    async def _broadcast_loop(self) -> None:
        interval = 1.0 / self.config.server.state_rate_hz
        while not self._stopping.is_set():
            if self.clients:
                text = encode(self.snapshot())
                stale = []
                for client in self.clients:
                    try:
                        await client.send(text)
                    except websockets.exceptions.ConnectionClosed:
                        stale.append(client)
                for client in stale:
                    self.clients.discard(client)
            await asyncio.sleep(interval)

    # -- client sessions ------------------------------------------------------

    async def _handle_client(self, connection: ServerConnection) -> None:
        self.clients.add(connection)
        out_seq = 0
        try:
            async for raw in connection:
                try:
                    msg = decode(raw)
                except ProtocolError as err:
                    out_seq += 1
                    await connection.send(encode(ErrMsg(seq=out_seq, message=str(err))))
                    break  # disconnect this client only
                if isinstance(msg, CmdMsg):
                    try:
                        self.mailbox.put(msg.to_command())
                    except ProtocolError as err:
                        out_seq += 1
                        await connection.send(encode(ErrMsg(seq=out_seq, message=str(err))))
                        break
                elif isinstance(msg, PingMsg):
                    out_seq += 1
                    await connection.send(encode(PongMsg(seq=out_seq, echo=msg.seq)))
                else:
                    out_seq += 1
                    await connection.send(
                        encode(ErrMsg(seq=out_seq, message=f"unexpected {type(msg).__name__}"))
                    )
                    break
        except websockets.exceptions.ConnectionClosed:
            pass
        finally:
            self.clients.discard(connection)
            try:
                await connection.close()
            except Exception:  # already gone
                pass

    # -- lifecycle -------------------------------------------------------------

    async def run(self) -> None:
        """Serve until stop() is called (or forever). Port 0 binds an
        ephemeral port, reported via bound_port after wait_started()."""
        async with ws_serve(self._handle_client, "0.0.0.0", self.port) as server:
            self._server = server
            self.bound_port = server.sockets[0].getsockname()[1] if server.sockets else self.port
            control = asyncio.create_task(self._control_loop())
            broadcast = asyncio.create_task(self._broadcast_loop())
            self._started.set()
            log.info("teleop server listening on port %d", self.bound_port)
            try:
                await self._stopping.wait()
            finally:
                control.cancel()
                broadcast.cancel()
                for task in (control, broadcast):
                    try:
                        await task
                    except asyncio.CancelledError:
                        pass

    async def wait_started(self) -> None:
        await self._started.wait()

    def stop(self) -> None:
        self._stopping.set()


def serve(config: Config, port: Optional[int] = None) -> None:
    """Blocking entry point for the CLI."""
    server = TeleopServer(config, port)
    try:
        asyncio.run(server.run())
    except KeyboardInterrupt:
        pass
