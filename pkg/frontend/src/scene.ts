// Pure scene description: turns a state message into world-space geometry
// (link chains, support polygon, CoM dot, trail) with no renderer types,
// so it is unit-testable and the three.js layer stays thin.
//
// Kinematic constants mirror the server's stock profile: 104 mm lateral
// hip link, 150 mm upper and lower links, hip mounts at (+/-120, +/-55) mm,
// and the hip-referenced knee convention where the shank pitch equals
// 55 deg minus the knee angle. The body renders attitude-flat, exactly like
// the kinematic twin that produced the state.

import { StateMsg } from "./protocol.js";

export const L_HIP = 0.104;
export const L_UPPER = 0.15;
export const L_LOWER = 0.15;
export const MOUNT_X = 0.12;
export const MOUNT_Y = 0.055;
export const KNEE_SHANK_DOWN = (55 * Math.PI) / 180;

export type Vec3 = [number, number, number];

export const LEGS = ["FL", "FR", "BL", "BR"] as const;
export type LegName = (typeof LEGS)[number];

const SIDE: Record<LegName, number> = { FL: 1, FR: -1, BL: 1, BR: -1 };
const END: Record<LegName, number> = { FL: 1, FR: 1, BL: -1, BR: -1 };

export interface LegChain {
  leg: LegName;
  stance: boolean;
  faulted: boolean; // an IK diagnostic names this leg
  points: Vec3[]; // mount, hip-link end, knee, foot (world frame)
}

export interface SceneDescription {
  bodyCenter: Vec3;
  heading: number;
  legs: LegChain[];
  supportPolygon: Vec3[]; // stance feet, ground plane, hull order not required
  comDot: Vec3 | null; // ground projection of the body center
  comMargin: number | null;
  trail: Vec3[];
}

function rotX(v: Vec3, a: number): Vec3 {
  const c = Math.cos(a), s = Math.sin(a);
  return [v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]];
}

/** Body-frame joint chain for one leg from its three joint angles. */
export function legChainBody(leg: LegName, hip: number, upper: number, lower: number): Vec3[] {
  const side = SIDE[leg];
  const mount: Vec3 = [END[leg] * MOUNT_X, side * MOUNT_Y, 0];
  const shank = KNEE_SHANK_DOWN - lower; // absolute shank pitch
  const hipEnd = rotX([0, side * L_HIP, 0], hip);
  const knee = rotX([L_UPPER * Math.sin(upper), side * L_HIP, -L_UPPER * Math.cos(upper)], hip);
  const foot = rotX(
    [
      L_UPPER * Math.sin(upper) + L_LOWER * Math.sin(shank),
      side * L_HIP,
      -L_UPPER * Math.cos(upper) - L_LOWER * Math.cos(shank),
    ],
    hip,
  );
  const add = (p: Vec3): Vec3 => [mount[0] + p[0], mount[1] + p[1], mount[2] + p[2]];
  return [mount, add(hipEnd), add(knee), add(foot)];
}

function toWorld(p: Vec3, odom: [number, number, number], bodyZ: number): Vec3 {
  const [x, y, heading] = odom;
  const c = Math.cos(heading), s = Math.sin(heading);
  return [x + c * p[0] - s * p[1], y + s * p[0] + c * p[1], p[2] + bodyZ];
}

/** Cosmetic interpolation between two 30 Hz snapshots for 60 fps rendering;
 * discrete fields (mode, stance, diagnostics) come from the newer state. */
export function interpolateStates(a: StateMsg, b: StateMsg, t: number): StateMsg {
  if (t <= 0) return a;
  if (t >= 1) return b;
  const lerp = (x: number, y: number) => x + (y - x) * t;
  const lerpAngle = (x: number, y: number) => {
    let d = (y - x) % (2 * Math.PI);
    if (d > Math.PI) d -= 2 * Math.PI;
    if (d < -Math.PI) d += 2 * Math.PI;
    return x + d * t;
  };
  return {
    ...b,
    time: lerp(a.time, b.time),
    joints: a.joints.map((v, i) => lerp(v, b.joints[i])),
    odometry: [
      lerp(a.odometry[0], b.odometry[0]),
      lerp(a.odometry[1], b.odometry[1]),
      lerpAngle(a.odometry[2], b.odometry[2]),
    ],
    body_z: lerp(a.body_z, b.body_z),
  };
}

export function buildScene(state: StateMsg, trail: [number, number][]): SceneDescription {
  const legs: LegChain[] = LEGS.map((leg, i) => {
    const [hip, upper, lower] = state.joints.slice(i * 3, i * 3 + 3);
    const chain = legChainBody(leg, hip, upper, lower).map((p) =>
      toWorld(p, state.odometry, state.body_z),
    );
    return {
      leg,
      stance: state.stance[i],
      faulted: state.diagnostics.some((d) => d.startsWith(leg)),
      points: chain,
    };
  });

  const supportPolygon = legs
    .filter((l) => l.stance)
    .map((l): Vec3 => [l.points[3][0], l.points[3][1], 0.001]);

  const comDot: Vec3 | null =
    supportPolygon.length >= 3 ? [state.odometry[0], state.odometry[1], 0.002] : null;

  return {
    bodyCenter: [state.odometry[0], state.odometry[1], state.body_z],
    heading: state.odometry[2],
    legs,
    supportPolygon,
    comDot,
    comMargin: state.com_margin,
    trail: trail.map(([x, y]): Vec3 => [x, y, 0.001]),
  };
}
