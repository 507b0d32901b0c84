// Wire protocol (version "1"): one JSON object per WebSocket text frame,
// mirroring the server's schema. Angles radians, lengths meters.

export const PROTOCOL_VERSION = "1";

export interface CmdMsg {
  type: "cmd";
  version: string;
  seq: number;
  start: boolean;
  walk: boolean;
  pattern: "trot" | "walk";
  step_length_x: number;
  step_length_y: number;
  swing_height: number;
  stance_depth: number;
  side_walk_mode: "linear" | "rotation";
  cycle_period: number;
  height: number;
  roll: number;
  pitch: number;
  yaw: number;
  timestamp: number;
}

export interface StateMsg {
  type: "state";
  version: string;
  seq: number;
  mode: "idle" | "standing" | "walking";
  tick: number;
  time: number;
  phase: number;
  joints_commanded: number[];
  joints: number[];
  odometry: [number, number, number];
  body_z: number;
  feet: [number, number, number][];
  stance: [boolean, boolean, boolean, boolean];
  com_margin: number | null;
  diagnostics: string[];
}

export interface PingMsg {
  type: "ping";
  version: string;
  seq: number;
}

export interface PongMsg {
  type: "pong";
  version: string;
  seq: number;
  echo: number;
}

export interface ErrMsg {
  type: "error";
  version: string;
  seq: number;
  message: string;
}

export type WireMessage = CmdMsg | StateMsg | PingMsg | PongMsg | ErrMsg;

export function encode(msg: WireMessage): string {
  return JSON.stringify(msg);
}

/** Parse an incoming frame; null for anything unusable. A version mismatch
 * throws so the session can surface its banner instead of half-working. */
export function decode(raw: string): WireMessage | null {
  let payload: unknown;
  try {
    payload = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof payload !== "object" || payload === null) return null;
  const msg = payload as { type?: string; version?: string };
  if (msg.version !== PROTOCOL_VERSION) {
    throw new Error(`protocol version mismatch: server=${msg.version}, ui=${PROTOCOL_VERSION}`);
  }
  switch (msg.type) {
    case "cmd":
    case "state":
    case "ping":
    case "pong":
    case "error":
      return payload as WireMessage;
    default:
      return null;
  }
}
