/** Dashboard wiring: stream -> model -> panes, instruction box -> API. */

import { StreamClient } from "./connection.js";
import { applyFrame, emptyModel, setConnection, timelineRows } from "./model.js";
import type { ViewModel } from "./model.js";
import {
  applyInstructionResult, emptyInstructionState, sendInstruction,
} from "./instruction.js";
import type { InstructionState } from "./instruction.js";
import { memoryPanes, paintMemory } from "./memoryView.js";
import { paintTrees, treeRows } from "./treeView.js";
import { buildScene, drawScene } from "./worldView.js";
import type { InstructionStatus } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

let vm: ViewModel = emptyModel();
let instr: InstructionState = emptyInstructionState();
let promoted = new Set<string>();
const expanded = new Set<string>();

const canvas = byId<HTMLCanvasElement>("world");
const ctx = canvas.getContext("2d")!;
const memoryRoot = byId<HTMLDivElement>("memory");
const treesRoot = byId<HTMLDivElement>("trees");
const timelineRoot = byId<HTMLDivElement>("timeline");
const transcriptRoot = byId<HTMLDivElement>("transcript");
const statusEl = byId<HTMLSpanElement>("status");
const cycleEl = byId<HTMLSpanElement>("cycle");
const box = byId<HTMLInputElement>("instruction");
const badge = byId<HTMLSpanElement>("badge");
const sendBtn = byId<HTMLButtonElement>("send");

function render(): void {
  statusEl.textContent = vm.connection;
  statusEl.className = `conn ${vm.connection}`;
  const snap = vm.latest;
  if (!snap) return;
  cycleEl.textContent = `cycle ${snap.cycle}`;

  const stale = vm.connection !== "open";
  const scene = buildScene(snap);
  if (scene) drawScene(ctx, scene, canvas.width, canvas.height, stale);

  promoted = paintMemory(memoryRoot, memoryPanes(snap), promoted);
  paintTrees(treesRoot, treeRows(snap.trees, expanded), expanded, (id) => {
    if (expanded.has(id)) expanded.delete(id);
    else expanded.add(id);
    render();
  });

  timelineRoot.textContent = "";
  const rows = timelineRows(vm).slice(-200);
  for (const e of rows) {
    const div = document.createElement("div");
    div.className = "timeline-row";
    div.textContent = `${String(e.cycle).padStart(5, "0")}.${e.seq} ${e.detail}`;
    timelineRoot.appendChild(div);
  }
  timelineRoot.scrollTop = timelineRoot.scrollHeight;

  transcriptRoot.textContent = "";
  for (const t of snap.transcript) {
    const div = document.createElement("div");
    div.className = `say ${t.speaker}`;
    div.textContent = `${t.speaker}: ${t.text}`;
    transcriptRoot.appendChild(div);
  }
  transcriptRoot.scrollTop = transcriptRoot.scrollHeight;

  badge.textContent = instr.badge ?? "";
  badge.className = `badge-line ${instr.badgeKind ?? ""}`;
  badge.title = instr.detail;
  if (document.activeElement !== box) box.value = instr.pending;
  sendBtn.textContent = instr.retryable ? "retry" : "send";
}

async function postInstruction(body: { text: string }): Promise<InstructionStatus> {
  const res = await fetch("/api/instruction", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  return (await res.json()) as InstructionStatus;
}

async function submit(): Promise<void> {
  const text = box.value.trim() || instr.pending;
  if (!text) return;
  instr = await sendInstruction(instr, text, postInstruction);
  render();
}

sendBtn.addEventListener("click", () => void submit());
box.addEventListener("keydown", (e) => {
  if (e.key === "Enter") void submit();
  instr = { ...instr, pending: box.value };
});

for (const [id, action] of [["pause", "pause"], ["resume", "resume"],
                            ["step", "step"]] as const) {
  byId<HTMLButtonElement>(id).addEventListener("click", () => {
    void fetch("/api/control", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ action, value: 1 }),
    });
  });
}

const proto = location.protocol === "https:" ? "wss" : "ws";
const client = new StreamClient(`${proto}://${location.host}/api/stream`, {
  onFrame: (frame) => {
    vm = applyFrame(vm, frame);
    render();
  },
  onState: (state) => {
    vm = setConnection(vm, state);
    render();
  },
});
client.start();
