// Teleop bounds, mirrored from shared/clamps.json (the server enforces the
// same numbers; tests/clamps.test.ts keeps the two copies identical, and
// the server side has the matching test against its config defaults).

export type Range = [number, number];

export const CLAMP_VERSION = "1";

export const CLAMPS: Record<string, Range> = {
  step_length_x: [-0.1, 0.1],
  step_length_y: [-0.06, 0.06],
  swing_height: [0.0, 0.08],
  stance_depth: [0.0, 0.02],
  cycle_period: [0.2, 5.0],
  height: [0.08, 0.24],
  roll: [-0.4363323129985824, 0.4363323129985824],
  pitch: [-0.4363323129985824, 0.4363323129985824],
  yaw: [-0.4363323129985824, 0.4363323129985824],
};

export function clamp(field: keyof typeof CLAMPS, value: number): number {
  const [lo, hi] = CLAMPS[field];
  return Math.min(hi, Math.max(lo, value));
}
