// Entry point: wire the session, inputs, renderer, and HUD together.
// Server address comes from the ?server=host:port query parameter and
// defaults to the page's host on port 8765.

import { GamepadEdges, InputState } from "./input.js";
import { buildScene, interpolateStates } from "./scene.js";
import { RobotView } from "./render.js";
import { UiSession } from "./session.js";

const STATE_INTERVAL_MS = 1000 / 30; // server broadcast period

function serverUrl(): string {
  const param = new URLSearchParams(window.location.search).get("server");
  const host = param ?? `${window.location.hostname || "127.0.0.1"}:8765`;
  return `ws://${host}`;
}

const canvas = document.getElementById("view") as HTMLCanvasElement;
const hud = document.getElementById("hud")!;
const banner = document.getElementById("banner")!;

const input = new InputState();
const edges = new GamepadEdges();
const view = new RobotView(canvas);
const session = new UiSession(serverUrl(), {
  onStatus: (status, detail) => {
    banner.textContent =
      status === "version-mismatch"
        ? `protocol mismatch - commands disabled (${detail})`
        : status === "live"
          ? ""
          : `${status}${detail ? ": " + detail : ""}`;
    banner.style.display = banner.textContent ? "block" : "none";
  },
  onServerError: (err) => {
    banner.textContent = `server: ${err.message}`;
    banner.style.display = "block";
  },
});
session.connect();

window.addEventListener("keydown", (e) => {
  if (e.repeat) return;
  input.keyDown(e.code, e.shiftKey);
  if (e.code === "Space") e.preventDefault();
});
window.addEventListener("keyup", (e) => input.keyUp(e.code, e.shiftKey));
window.addEventListener("resize", () => view.resize());

// sliders mirror the less frequently used scalar fields
for (const [id, field] of [
  ["height-slider", "height"],
  ["swing-slider", "swing_height"],
  ["stance-slider", "stance_depth"],
  ["period-slider", "cycle_period"],
] as const) {
  const el = document.getElementById(id) as HTMLInputElement | null;
  el?.addEventListener("input", () => {
    (input.draft as unknown as Record<string, number>)[field] = Number(el.value);
  });
}

let lastFrame = performance.now();
function frame(now: number): void {
  const dt = Math.min(0.1, (now - lastFrame) / 1000);
  lastFrame = now;

  const pads = navigator.getGamepads?.() ?? [];
  const gp = pads.find((p): p is Gamepad => Boolean(p));
  if (gp) input.applyGamepad(gp, edges);
  input.update(dt);
  session.send(input.toCommand(0, Date.now() / 1000));

  let state = session.latestState;
  if (state) {
    if (session.previousState) {
      // cosmetic smoothing: render one broadcast interval behind, easing
      // from the previous snapshot into the latest one
      const t = Math.min(1, Math.max(0, (Date.now() - session.latestStateAt) / STATE_INTERVAL_MS));
      state = interpolateStates(session.previousState, state, t);
    }
    view.draw(buildScene(state, session.trail));
    const margin = state.com_margin === null ? "--" : (state.com_margin * 1000).toFixed(0) + " mm";
    const d = input.draft;
    hud.innerHTML = [
      `mode <b>${state.mode}</b>  t=${state.time.toFixed(1)}s  phase=${state.phase.toFixed(2)}`,
      `gait ${d.pattern} (${d.side_walk_mode})  step x=${d.step_length_x.toFixed(3)} y=${d.step_length_y.toFixed(3)}`,
      `height ${d.height.toFixed(3)} m  swing ${d.swing_height.toFixed(3)} m  margin ${margin}`,
      `feet down ${state.stance.filter(Boolean).length}/4  odom (${state.odometry[0].toFixed(2)}, ${state.odometry[1].toFixed(2)})`,
      state.diagnostics.length ? `<span class="warn">IK: ${state.diagnostics.join("; ")}</span>` : "",
      `[space] start=${d.start}  [g] walk=${d.walk}  [t] pattern  [m] side mode  WASD step, arrows tilt`,
    ]
      .filter(Boolean)
      .join("<br>");
  }
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
