import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { Frame, Snapshot, TraceEvent } from "../src/types.js";

export interface StreamFixture {
  frames: Snapshot[];
  golden: TraceEvent[];
}

export function loadFixture(name: string): StreamFixture {
  const here = dirname(fileURLToPath(import.meta.url));
  const raw = readFileSync(join(here, "fixtures", name), "utf-8");
  return JSON.parse(raw) as StreamFixture;
}

export function asFrames(fix: StreamFixture): Frame[] {
  return fix.frames.map((data, i) => ({
    type: i === 0 ? "hello" : "snapshot",
    data,
  }));
}
