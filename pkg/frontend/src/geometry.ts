/** World-view math: the same personal-space geometry the engine uses. */

import type { RobotPose, WorldObjectView, WorldView } from "./types.js";

export function distance(robot: RobotPose, obj: WorldObjectView): number {
  return Math.hypot(obj.x - robot.x, obj.y - robot.y);
}

/** Signed bearing from the robot's heading to the object, in (-180, 180]. */
export function bearingOffset(robot: RobotPose, obj: WorldObjectView): number {
  const bearing = (Math.atan2(obj.y - robot.y, obj.x - robot.x) * 180) / Math.PI;
  let diff = (bearing - robot.heading) % 360;
  if (diff > 180) diff -= 360;
  if (diff <= -180) diff += 360;
  return diff;
}

/** Mirrors the engine's proximity trigger: within range, inside the arc. */
export function inPersonalSpace(world: WorldView, obj: WorldObjectView): boolean {
  return (
    distance(world.robot, obj) <= world.proximity_cm &&
    Math.abs(bearingOffset(world.robot, obj)) <= world.arc_deg
  );
}

export interface CanvasTransform {
  scale: number;
  ox: number;
  oy: number;
}

/** Fit world bounds into a canvas, preserving aspect, y pointing up. */
export function fitTransform(
  bounds: [number, number, number, number],
  width: number,
  height: number,
  margin = 12,
): CanvasTransform {
  const [x0, y0, x1, y1] = bounds;
  const sx = (width - 2 * margin) / (x1 - x0);
  const sy = (height - 2 * margin) / (y1 - y0);
  const scale = Math.min(sx, sy);
  return {
    scale,
    ox: margin - x0 * scale + (width - 2 * margin - (x1 - x0) * scale) / 2,
    oy: height - margin + y0 * scale - (height - 2 * margin - (y1 - y0) * scale) / 2,
  };
}

export function toCanvas(t: CanvasTransform, x: number, y: number): [number, number] {
  return [t.ox + x * t.scale, t.oy - y * t.scale];
}
