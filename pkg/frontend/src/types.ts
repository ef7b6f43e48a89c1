/**
 * Wire types for the engine's snapshot stream and instruction endpoint.
 * Mirrors docs/api.md; the dashboard renders only what the server sends.
 */

export interface AttentionItem {
  id: string;
  kind: "assertion" | "command";
  tag: string;
  state: "active" | "deactivated";
  source: "user" | "grounding" | "promotion" | "operator";
  born: number;
  deactivated: number | null;
  text: string;
  provenance: string;
}

export interface HaloEntry {
  id: string;
  rule: string;
  step: 1 | 2;
  belief: number;
  text: string;
  supports: string[];
}

export interface DirectiveNode {
  id: string;
  kind: string;
  status: "pending" | "running" | "succeeded" | "failed";
  summary: string;
  depth: number;
  note: string;
  negative: boolean;
  children: DirectiveNode[];
}

export interface TreeSnapshot {
  id: string;
  focus: string;
  mode: "reaction" | "command";
  status: "running" | "succeeded" | "failed";
  cycles: number;
  roots: DirectiveNode[];
}

export interface RobotPose {
  x: number;
  y: number;
  heading: number;
  gripper: string;
  lift: string;
}

export interface WorldObjectView {
  id: string;
  x: number;
  y: number;
  radius: number;
  tracked: string | null;
  fill: string;
  striped: boolean;
}

export interface WorldView {
  bounds: [number, number, number, number];
  robot: RobotPose;
  proximity_cm: number;
  arc_deg: number;
  objects: WorldObjectView[];
}

export interface TranscriptEntry {
  cycle: number;
  speaker: "user" | "robot" | "agent";
  text: string;
}

export interface TraceEvent {
  cycle: number;
  seq: number;
  category: "attention" | "halo" | "directive" | "grounding" | "speech";
  detail: string;
}

export interface Snapshot {
  cycle: number;
  seed: number;
  attention: AttentionItem[];
  working: { render: string[]; dump: string[] };
  halo: HaloEntry[];
  trees: TreeSnapshot[];
  world: WorldView | null;
  transcript: TranscriptEntry[];
  events: TraceEvent[];
  event_count: number;
}

export interface Frame {
  type: "hello" | "snapshot";
  data: Snapshot;
}

export type InstructionStatus =
  | { status: "queued"; category: string }
  | { status: "rejected"; prefix: string; reason: string }
  | { status: "error"; reason: string };
