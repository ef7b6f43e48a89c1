/**
 * Three-pane memory inspector: attention items with state badges, working
 * memory in arrow notation, halo facts with rule provenance and step
 * depth. Newly promoted facts are tagged so the DOM layer can animate
 * them from the halo pane into attention.
 */

import type { Snapshot } from "./types.js";

export interface AttentionRow {
  id: string;
  text: string;
  tag: string;
  state: string;
  source: string;
  promoted: boolean;
  provenance: string;
}

export interface HaloRow {
  id: string;
  text: string;
  rule: string;
  step: number;
  belief: number;
}

export interface MemoryPanes {
  attention: AttentionRow[];
  working: string[];
  halo: HaloRow[];
}

export function memoryPanes(snap: Snapshot): MemoryPanes {
  return {
    attention: snap.attention.map((it) => ({
      id: it.id,
      text: it.text,
      tag: it.tag,
      state: it.state,
      source: it.source,
      promoted: it.source === "promotion",
      provenance: it.provenance,
    })),
    working: snap.working.render,
    halo: snap.halo.map((f) => ({
      id: f.id,
      text: f.text,
      rule: f.rule,
      step: f.step,
      belief: f.belief,
    })),
  };
}

function el(tag: string, cls: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function paintMemory(root: HTMLElement, panes: MemoryPanes,
                            previouslyPromoted: Set<string>): Set<string> {
  root.textContent = "";
  const attention = el("div", "pane");
  attention.appendChild(el("h3", "", "attention"));
  for (const row of panes.attention) {
    const item = el("div", `attn-item ${row.state}`);
    item.appendChild(el("span", `badge tag-${row.tag}`, row.tag));
    item.appendChild(el("span", `badge state-${row.state}`, row.state));
    item.appendChild(el("span", "item-text", row.text));
    if (row.promoted) {
      item.appendChild(el("span", "badge promoted", "from halo"));
      if (!previouslyPromoted.has(row.id)) item.classList.add("arriving");
    }
    if (row.provenance) item.title = row.provenance;
    attention.appendChild(item);
  }

  const working = el("div", "pane");
  working.appendChild(el("h3", "", "working memory"));
  for (const line of panes.working) {
    working.appendChild(el("div", "wm-fact", line));
  }

  const halo = el("div", "pane");
  halo.appendChild(el("h3", "", "halo"));
  for (const row of panes.halo) {
    const fact = el("div", "halo-fact");
    fact.appendChild(el("span", `badge step-${row.step}`, `step ${row.step}`));
    fact.appendChild(el("span", "item-text", row.text));
    fact.appendChild(el("span", "halo-meta",
                        `${row.rule} · ${row.belief.toFixed(2)}`));
    halo.appendChild(fact);
  }

  root.appendChild(attention);
  root.appendChild(working);
  root.appendChild(halo);
  return new Set(panes.attention.filter((r) => r.promoted).map((r) => r.id));
}
