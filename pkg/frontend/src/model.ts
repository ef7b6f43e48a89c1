/**
 * The view model is a pure fold over server frames: no client-side
 * inference, no state that did not come from the engine. Disconnecting
 * simply stops the fold, freezing the view.
 */

import type { Frame, Snapshot, TraceEvent } from "./types.js";

export type ConnectionState = "connecting" | "open" | "closed";

export interface ViewModel {
  latest: Snapshot | null;
  /** strictly (cycle, seq)-ordered backlog of trace events */
  events: TraceEvent[];
  connection: ConnectionState;
  droppedFrames: number;
}

export function emptyModel(): ViewModel {
  return { latest: null, events: [], connection: "connecting", droppedFrames: 0 };
}

function eventKey(e: TraceEvent): number {
  return e.cycle * 1_000_000 + e.seq;
}

/**
 * Apply one server frame. Out-of-order frames (cycle not beyond the
 * latest) are discarded; a hello frame may replace state wholesale when
 * the stream (re)opens. Returns a new model; never mutates.
 */
export function applyFrame(vm: ViewModel, frame: Frame): ViewModel {
  const snap = frame.data;
  if (vm.latest !== null) {
    if (frame.type === "hello") {
      if (snap.cycle < vm.latest.cycle) {
        // engine restarted; start the fold over
        return { ...vm, latest: snap, events: [...snap.events] };
      }
    } else if (snap.cycle <= vm.latest.cycle) {
      return { ...vm, droppedFrames: vm.droppedFrames + 1 };
    }
  }
  const lastKey = vm.events.length
    ? eventKey(vm.events[vm.events.length - 1]!)
    : -1;
  const fresh = snap.events
    .filter((e) => eventKey(e) > lastKey)
    .sort((a, b) => eventKey(a) - eventKey(b));
  return {
    ...vm,
    latest: snap,
    events: vm.events.concat(fresh),
  };
}

export function setConnection(vm: ViewModel, state: ConnectionState): ViewModel {
  return { ...vm, connection: state };
}

/** Directive timeline rows, strictly in (cycle, seq) order. */
export function timelineRows(vm: ViewModel): TraceEvent[] {
  return vm.events.filter((e) => e.category === "directive");
}

/** Event-order fidelity check: true when the backlog is strictly ordered. */
export function eventsStrictlyOrdered(events: TraceEvent[]): boolean {
  for (let i = 1; i < events.length; i++) {
    if (eventKey(events[i]!) <= eventKey(events[i - 1]!)) return false;
  }
  return true;
}
