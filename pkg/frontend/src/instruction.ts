/**
 * Instruction box state machine: send an utterance, show what it became
 * (rule/operator/command badge) or the rejection diagnostic inline; on a
 * network failure keep the text so the user can retry.
 */

import type { InstructionStatus } from "./types.js";

export interface InstructionState {
  pending: string;          // text preserved in the box
  badge: string | null;     // e.g. "rule added"
  badgeKind: "ok" | "reject" | "error" | null;
  detail: string;
  retryable: boolean;
}

export function emptyInstructionState(): InstructionState {
  return { pending: "", badge: null, badgeKind: null, detail: "", retryable: false };
}

const CATEGORY_BADGES: Record<string, string> = {
  "rule-teaching": "rule added",
  "operator-teaching": "operator added",
  command: "command sent",
  "yn-question": "question posed",
  "wh-question": "question posed",
  fact: "fact noted",
};

export function badgeFor(status: InstructionStatus): string {
  if (status.status === "queued") {
    return CATEGORY_BADGES[status.category] ?? "accepted";
  }
  if (status.status === "rejected") {
    return `rejected after "${status.prefix}"`;
  }
  return "error";
}

/** Fold a server response (or a network failure) into the box state. */
export function applyInstructionResult(
  state: InstructionState,
  text: string,
  result: InstructionStatus | { status: "network-failure"; reason: string },
): InstructionState {
  if (result.status === "network-failure") {
    return {
      pending: text,            // preserved for retry
      badge: "send failed",
      badgeKind: "error",
      detail: result.reason,
      retryable: true,
    };
  }
  if (result.status === "queued") {
    return { pending: "", badge: badgeFor(result), badgeKind: "ok",
             detail: result.category, retryable: false };
  }
  if (result.status === "rejected") {
    return { pending: text, badge: badgeFor(result), badgeKind: "reject",
             detail: result.reason, retryable: false };
  }
  return { pending: text, badge: "error", badgeKind: "error",
           detail: result.reason, retryable: false };
}

export async function sendInstruction(
  state: InstructionState,
  text: string,
  post: (body: { text: string }) => Promise<InstructionStatus>,
): Promise<InstructionState> {
  try {
    const result = await post({ text });
    return applyInstructionResult(state, text, result);
  } catch (err) {
    return applyInstructionResult(state, text, {
      status: "network-failure",
      reason: err instanceof Error ? err.message : String(err),
    });
  }
}
