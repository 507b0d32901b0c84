// Keyboard and gamepad teleop. Both paths edit the same command draft;
// every numeric field goes through the shared clamp table, so the server
// accepts whatever this module emits unmodified.
//
// Keyboard map (editable at runtime via `bindings`):
//   W/S          step length x (hold to ramp, release to decay)
//   A/D          step length y
//   arrows       roll / pitch; with Shift, left/right become yaw
//   Q/E          body height down / up
//   R/F          swing height up / down
//   space        start toggle      G  walk toggle
//   T            gait pattern      M  side-walk mode
// Gamepad (standard mapping): left stick = step x/y, right stick =
// roll/pitch (yaw while L1 held), A=start, B=walk, X=pattern, Y=side mode.

import { CLAMPS, clamp } from "./clamps.js";
import { CmdMsg, PROTOCOL_VERSION } from "./protocol.js";

export interface CommandDraft {
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
}

export function neutralDraft(): CommandDraft {
  return {
    start: false,
    walk: false,
    pattern: "trot",
    step_length_x: 0,
    step_length_y: 0,
    swing_height: 0.04,
    stance_depth: 0,
    side_walk_mode: "linear",
    cycle_period: 0.8,
    height: 0.17,
    roll: 0,
    pitch: 0,
    yaw: 0,
  };
}

export const bindings: Record<string, string> = {
  KeyW: "step_x+",
  KeyS: "step_x-",
  KeyA: "step_y+",
  KeyD: "step_y-",
  ArrowUp: "pitch+",
  ArrowDown: "pitch-",
  ArrowLeft: "roll+",
  ArrowRight: "roll-",
  KeyQ: "height-",
  KeyE: "height+",
  KeyR: "swing+",
  KeyF: "swing-",
  Space: "toggle_start",
  KeyG: "toggle_walk",
  KeyT: "toggle_pattern",
  KeyM: "toggle_side_mode",
};

// Full-scale ramp time in seconds for held axes, and decay back to zero.
const RAMP_S = 0.6;
const DECAY_S = 0.3;

export class InputState {
  draft: CommandDraft = neutralDraft();
  private held = new Set<string>();
  private shift = false;

  keyDown(code: string, shiftKey = false): void {
    this.shift = shiftKey;
    const action = bindings[code];
    if (!action) return; // unbound inputs are ignored
    if (action === "toggle_start") this.draft.start = !this.draft.start;
    else if (action === "toggle_walk") this.draft.walk = !this.draft.walk;
    else if (action === "toggle_pattern") {
      this.draft.pattern = this.draft.pattern === "trot" ? "walk" : "trot";
      this.draft.cycle_period = this.draft.pattern === "trot" ? 0.8 : 1.6;
    } else if (action === "toggle_side_mode") {
      this.draft.side_walk_mode = this.draft.side_walk_mode === "linear" ? "rotation" : "linear";
    } else this.held.add(action);
  }

  keyUp(code: string, shiftKey = false): void {
    this.shift = shiftKey;
    const action = bindings[code];
    if (action) this.held.delete(action);
  }

  /** Advance held-key ramps and stick decay by dt seconds. */
  update(dt: number): void {
    const d = this.draft;
    const move = (field: "step_length_x" | "step_length_y" | "roll" | "pitch" | "yaw",
                  plus: boolean, minus: boolean) => {
      const [, hi] = CLAMPS[field];
      const rate = hi / RAMP_S;
      let v = d[field];
      if (plus === minus) {
        // nothing held (or both): decay toward zero
        const decay = (hi / DECAY_S) * dt;
        v = Math.abs(v) <= decay ? 0 : v - Math.sign(v) * decay;
      } else {
        v += (plus ? rate : -rate) * dt;
      }
      d[field] = clamp(field, v);
    };
    move("step_length_x", this.held.has("step_x+"), this.held.has("step_x-"));
    move("step_length_y", this.held.has("step_y+"), this.held.has("step_y-"));
    move("pitch", this.held.has("pitch+"), this.held.has("pitch-"));
    if (this.shift) {
      move("yaw", this.held.has("roll+"), this.held.has("roll-"));
      move("roll", false, false);
    } else {
      move("roll", this.held.has("roll+"), this.held.has("roll-"));
      move("yaw", false, false);
    }
    // height and swing step in small increments while held, no decay
    const stepField = (field: "height" | "swing_height", plus: boolean, minus: boolean, rate: number) => {
      if (plus !== minus) {
        d[field] = clamp(field === "height" ? "height" : "swing_height",
                         d[field] + (plus ? rate : -rate) * dt);
      }
    };
    stepField("height", this.held.has("height+"), this.held.has("height-"), 0.08);
    stepField("swing_height", this.held.has("swing+"), this.held.has("swing-"), 0.04);
  }

  /** Fold one polled gamepad sample into the draft (sticks override ramps). */
  applyGamepad(gp: Gamepad, edges: GamepadEdges): void {
    const dead = (v: number) => (Math.abs(v) < 0.12 ? 0 : v);
    const lx = dead(gp.axes[0] ?? 0);
    const ly = dead(gp.axes[1] ?? 0);
    const rx = dead(gp.axes[2] ?? 0);
    const ry = dead(gp.axes[3] ?? 0);
    const d = this.draft;
    if (lx || ly) {
      d.step_length_x = clamp("step_length_x", -ly * CLAMPS.step_length_x[1]);
      d.step_length_y = clamp("step_length_y", -lx * CLAMPS.step_length_y[1]);
    }
    if (rx || ry) {
      const yawMode = gp.buttons[4]?.pressed ?? false; // L1
      d.pitch = clamp("pitch", -ry * CLAMPS.pitch[1]);
      if (yawMode) d.yaw = clamp("yaw", -rx * CLAMPS.yaw[1]);
      else d.roll = clamp("roll", -rx * CLAMPS.roll[1]);
    }
    if (edges.pressed(gp, 0)) d.start = !d.start; // A
    if (edges.pressed(gp, 1)) d.walk = !d.walk; // B
    if (edges.pressed(gp, 2)) {
      d.pattern = d.pattern === "trot" ? "walk" : "trot"; // X
      d.cycle_period = d.pattern === "trot" ? 0.8 : 1.6;
    }
    if (edges.pressed(gp, 3)) {
      d.side_walk_mode = d.side_walk_mode === "linear" ? "rotation" : "linear"; // Y
    }
  }

  toCommand(seq: number, timestamp: number): CmdMsg {
    const d = this.draft;
    return {
      type: "cmd",
      version: PROTOCOL_VERSION,
      seq,
      start: d.start,
      walk: d.walk,
      pattern: d.pattern,
      step_length_x: clamp("step_length_x", d.step_length_x),
      step_length_y: clamp("step_length_y", d.step_length_y),
      swing_height: clamp("swing_height", d.swing_height),
      stance_depth: clamp("stance_depth", d.stance_depth),
      side_walk_mode: d.side_walk_mode,
      cycle_period: clamp("cycle_period", d.cycle_period),
      height: clamp("height", d.height),
      roll: clamp("roll", d.roll),
      pitch: clamp("pitch", d.pitch),
      yaw: clamp("yaw", d.yaw),
      timestamp,
    };
  }
}

/** Rising-edge detector for gamepad buttons (toggles need presses, not holds). */
export class GamepadEdges {
  private prev: boolean[] = [];

  pressed(gp: Gamepad, index: number): boolean {
    const now = gp.buttons[index]?.pressed ?? false;
    const was = this.prev[index] ?? false;
    this.prev[index] = now;
    return now && !was;
  }
}
