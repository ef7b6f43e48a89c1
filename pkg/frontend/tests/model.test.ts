import { describe, expect, it } from "vitest";

import {
  applyFrame, emptyModel, eventsStrictlyOrdered, setConnection, timelineRows,
} from "../src/model.js";
import { asFrames, loadFixture } from "./helpers.js";

const tiger = loadFixture("tiger_stream.json");

describe("view model fold", () => {
  it("accumulates every frame of the recorded stream in order", () => {
    let vm = emptyModel();
    for (const frame of asFrames(tiger)) vm = applyFrame(vm, frame);
    expect(vm.latest?.cycle).toBe(tiger.frames[tiger.frames.length - 1]!.cycle);
    expect(eventsStrictlyOrdered(vm.events)).toBe(true);
    expect(vm.droppedFrames).toBe(0);
  });

  it("discards out-of-order snapshot frames", () => {
    const frames = asFrames(tiger);
    let vm = emptyModel();
    vm = applyFrame(vm, frames[0]!);
    vm = applyFrame(vm, frames[5]!);
    const cycle = vm.latest!.cycle;
    vm = applyFrame(vm, frames[2]!); // older frame arrives late
    expect(vm.latest!.cycle).toBe(cycle);
    expect(vm.droppedFrames).toBe(1);
    expect(eventsStrictlyOrdered(vm.events)).toBe(true);
  });

  it("never mutates the previous model (pure view)", () => {
    const frames = asFrames(tiger);
    let vm = emptyModel();
    vm = applyFrame(vm, frames[0]!);
    const frozen = Object.freeze({ ...vm, events: Object.freeze([...vm.events]) });
    const next = applyFrame(frozen as typeof vm, frames[1]!);
    expect(next).not.toBe(frozen);
    expect(frozen.events.length).toBeLessThanOrEqual(next.events.length);
  });

  it("freezes when the connection drops: no state changes client-side", () => {
    let vm = emptyModel();
    for (const frame of asFrames(tiger).slice(0, 10)) vm = applyFrame(vm, frame);
    const closed = setConnection(vm, "closed");
    expect(closed.latest).toBe(vm.latest);
    expect(closed.events).toEqual(vm.events);
  });

  it("events carried by the model equal the engine's own log", () => {
    let vm = emptyModel();
    for (const frame of asFrames(tiger)) vm = applyFrame(vm, frame);
    // every event the model holds must exist verbatim in the golden log
    const golden = new Set(tiger.golden.map((e) => `${e.cycle}.${e.seq}.${e.detail}`));
    for (const e of vm.events) {
      expect(golden.has(`${e.cycle}.${e.seq}.${e.detail}`)).toBe(true);
    }
  });
});

describe("directive timeline", () => {
  it("shows exactly the golden directive order", () => {
    let vm = emptyModel();
    for (const frame of asFrames(tiger)) vm = applyFrame(vm, frame);
    const shown = timelineRows(vm).map((e) => `${e.cycle}.${e.seq}`);
    const expected = tiger.golden
      .filter((e) => e.category === "directive")
      .filter((e) => e.cycle >= tiger.frames[0]!.cycle)
      .map((e) => `${e.cycle}.${e.seq}`);
    expect(shown).toEqual(expected);
  });
});
