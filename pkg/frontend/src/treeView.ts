/**
 * Action-tree outline. Succeeded branches collapse by default to keep a
 * full identification cascade readable; the user can expand them.
 */

import type { DirectiveNode, TreeSnapshot } from "./types.js";

export interface TreeRow {
  treeId: string;
  directiveId: string | null;  // null for the tree header row
  depth: number;
  label: string;
  status: string;
  collapsed: boolean;
  childCount: number;
}

function subtreeSettled(d: DirectiveNode): boolean {
  return d.status === "succeeded" &&
    d.children.every((c) => c.status === "succeeded" || c.status === "failed");
}

export function treeRows(trees: TreeSnapshot[],
                         expanded: Set<string>): TreeRow[] {
  const rows: TreeRow[] = [];
  for (const tree of trees) {
    rows.push({
      treeId: tree.id,
      directiveId: null,
      depth: 0,
      label: `${tree.id} · ${tree.mode} · focus ${tree.focus}`,
      status: tree.status,
      collapsed: false,
      childCount: tree.roots.length,
    });
    const walk = (d: DirectiveNode, depth: number) => {
      const collapse = subtreeSettled(d) && d.children.length > 0 &&
        !expanded.has(d.id);
      const suffix = d.negative ? " (negative)" : d.note ? ` (${d.note})` : "";
      rows.push({
        treeId: tree.id,
        directiveId: d.id,
        depth,
        label: `${d.kind}[${d.summary}]${suffix}`,
        status: d.status,
        collapsed: collapse,
        childCount: d.children.length,
      });
      if (!collapse) {
        for (const c of d.children) walk(c, depth + 1);
      }
    };
    for (const root of tree.roots) walk(root, 1);
  }
  return rows;
}

export function paintTrees(root: HTMLElement, rows: TreeRow[],
                           expanded: Set<string>,
                           onToggle: (id: string) => void): void {
  root.textContent = "";
  for (const row of rows) {
    const node = document.createElement("div");
    node.className = row.directiveId === null
      ? `tree-header ${row.status}` : `tree-row ${row.status}`;
    node.style.paddingLeft = `${row.depth * 16}px`;
    const marker = row.collapsed ? "▸ " : row.childCount > 0 ? "▾ " : "· ";
    node.textContent = marker + row.label + ` — ${row.status}`;
    if (row.directiveId !== null && row.childCount > 0) {
      const id = row.directiveId;
      node.addEventListener("click", () => onToggle(id));
    }
    root.appendChild(node);
  }
}
