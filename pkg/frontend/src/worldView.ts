/**
 * Top-down world scene: robot pose with heading and the personal-space
 * arc, objects filled with their dominant canonical color, a striped
 * overlay when the striped predicate is believed, and transient flashes
 * for speech output (beeps, exclamations).
 */

import { inPersonalSpace } from "./geometry.js";
import { fitTransform, toCanvas } from "./geometry.js";
import type { Snapshot, WorldView } from "./types.js";

const FILL_COLORS: Record<string, string> = {
  red: "#c0392b", orange: "#e67e22", yellow: "#f1c40f", green: "#27ae60",
  blue: "#2980b9", purple: "#8e44ad", black: "#1b1b1b", gray: "#7f8c8d",
  white: "#ecf0f1",
};

export interface SceneObject {
  id: string;
  x: number;
  y: number;
  radius: number;
  fill: string;
  striped: boolean;
  highlighted: boolean;   // inside the personal space
  label: string;
}

export interface Scene {
  world: WorldView;
  objects: SceneObject[];
  flash: string | null;   // latest robot speech this cycle, if any
}

/** Pure scene construction from one snapshot; rendering draws this. */
export function buildScene(snap: Snapshot): Scene | null {
  if (!snap.world) return null;
  const world = snap.world;
  const speech = snap.events.filter(
    (e) => e.category === "speech" && e.detail.startsWith("robot:"),
  );
  const last = speech.length ? speech[speech.length - 1]! : null;
  return {
    world,
    objects: world.objects.map((o) => ({
      id: o.id,
      x: o.x,
      y: o.y,
      radius: o.radius,
      fill: FILL_COLORS[o.fill] ?? "#7f8c8d",
      striped: o.striped,
      highlighted: inPersonalSpace(world, o),
      label: o.tracked ? `${o.id} (${o.tracked})` : o.id,
    })),
    flash: last ? last.detail.slice("robot:".length).trim() : null,
  };
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  scene: Scene,
  width: number,
  height: number,
  stale: boolean,
): void {
  const t = fitTransform(scene.world.bounds, width, height);
  ctx.clearRect(0, 0, width, height);
  ctx.save();
  if (stale) ctx.globalAlpha = 0.35;

  // floor
  const [bx0, by0] = toCanvas(t, scene.world.bounds[0], scene.world.bounds[3]);
  const [bx1, by1] = toCanvas(t, scene.world.bounds[2], scene.world.bounds[1]);
  ctx.fillStyle = "#10151c";
  ctx.fillRect(bx0, by0, bx1 - bx0, by1 - by0);
  ctx.strokeStyle = "#2c3a4d";
  ctx.strokeRect(bx0, by0, bx1 - bx0, by1 - by0);

  // personal-space arc
  const robot = scene.world.robot;
  const [rx, ry] = toCanvas(t, robot.x, robot.y);
  const arc = (scene.world.arc_deg * Math.PI) / 180;
  const heading = (-robot.heading * Math.PI) / 180; // canvas y is flipped
  ctx.beginPath();
  ctx.moveTo(rx, ry);
  ctx.arc(rx, ry, scene.world.proximity_cm * t.scale, heading - arc, heading + arc);
  ctx.closePath();
  ctx.fillStyle = "rgba(46, 204, 113, 0.12)";
  ctx.fill();
  ctx.strokeStyle = "rgba(46, 204, 113, 0.5)";
  ctx.stroke();

  // objects
  for (const o of scene.objects) {
    const [ox, oy] = toCanvas(t, o.x, o.y);
    const r = Math.max(3, o.radius * t.scale);
    ctx.beginPath();
    ctx.arc(ox, oy, r, 0, Math.PI * 2);
    ctx.fillStyle = o.fill;
    ctx.fill();
    if (o.striped) {
      ctx.save();
      ctx.clip();
      ctx.strokeStyle = "rgba(255,255,255,0.75)";
      ctx.lineWidth = 1.5;
      for (let i = -r; i <= r; i += 4) {
        ctx.beginPath();
        ctx.moveTo(ox - r, oy + i);
        ctx.lineTo(ox + r, oy + i);
        ctx.stroke();
      }
      ctx.restore();
    }
    ctx.strokeStyle = o.highlighted ? "#2ecc71" : "#44566c";
    ctx.lineWidth = o.highlighted ? 3 : 1;
    ctx.beginPath();
    ctx.arc(ox, oy, r, 0, Math.PI * 2);
    ctx.stroke();
    ctx.fillStyle = "#9fb2c8";
    ctx.font = "11px system-ui";
    ctx.fillText(o.label, ox + r + 4, oy + 3);
  }

  // robot: triangle pointing along the heading
  ctx.save();
  ctx.translate(rx, ry);
  ctx.rotate(heading);
  ctx.beginPath();
  ctx.moveTo(10, 0);
  ctx.lineTo(-7, 6);
  ctx.lineTo(-7, -6);
  ctx.closePath();
  ctx.fillStyle = "#3498db";
  ctx.fill();
  ctx.strokeStyle = "#aed6f1";
  ctx.stroke();
  ctx.restore();

  if (scene.flash) {
    ctx.fillStyle = "#f9e79f";
    ctx.font = "bold 13px system-ui";
    ctx.fillText(`"${scene.flash}"`, rx + 14, ry - 12);
  }
  ctx.restore();
}
