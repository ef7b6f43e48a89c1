"""The engine cycle loop: drains grounding and instruction queues, expires
memory, re-derives the halo, matches operators, and steps the action
trees. Owns every mutable component; external producers only enqueue."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional

from .config import EngineConfig
from .director import ActionTree, Director, DirectiveStatus
from .grounding.kernel import GroundingKernel, SimulatedKernel
from .grounding.vision import classify_colors
from .grounding.world import World
from .inference import RuleBase, RuleError
from .kinds import DirectiveKind
from .language import Language, Rejection
from .memory import FocusItem, FocusKind, FocusSource, FocusState, Memory
from .policy import OperatorBase, OperatorError
from .semnet import NameGen, NodeKind, dump, render, summary


@dataclass
class TranscriptEntry:
    cycle: int
    speaker: str   # "user" | "robot" | "agent"
    text: str

    def line(self) -> str:
        return f"{self.cycle:05d} {self.speaker}: {self.text}"


class Engine:
    def __init__(self, *, language: Optional[Language] = None,
                 world: Optional[World] = None,
                 config: Optional[EngineConfig] = None,
                 seed: int = 0):
        self.cfg = config or EngineConfig()
        self.seed = seed
        self.names = NameGen()
        self.rng = random.Random(seed)
        self.language = language or Language()
        self.memory = Memory(self.cfg, self.names)
        self.rules = RuleBase(self.names)
        self.ops = OperatorBase(self.names)
        self.world = world
        self.kernel: GroundingKernel = (
            SimulatedKernel(world, self.cfg, self.names) if world is not None
            else GroundingKernel())
        from .trace import Trace
        self.trace = Trace()
        self.director = Director(self.memory, self.ops, self.kernel, self.rng,
                                 self.names, self.cfg, self.trace.emit,
                                 self._note_new_item)
        self.transcript: List[TranscriptEntry] = []
        self.cycle = 0
        self.last_object: Optional[str] = None
        self._instr_queue: List[str] = []
        self._pending_items: List[FocusItem] = []
        self._halo_keys: set = set()
        self._focus_trees: Dict[str, List[str]] = {}

    # ------------------------------------------------------------ inputs

    def instruct(self, text: str) -> dict:
        """Queue an utterance; returns the immediate parse status (the
        artifact lands at the start of the next cycle)."""
        result = self.language.parse(text)
        if not result.ok:
            return {"status": "rejected", "prefix": result.prefix,
                    "reason": f"cannot parse past {result.prefix!r}"}
        self._instr_queue.append(text)
        alist = self.language.digest(result)
        return {"status": "queued", "category": alist.category}

    def teach(self, text: str) -> dict:
        """Instruct and run one cycle so the artifact takes effect."""
        status = self.instruct(text)
        self.run(1)
        return status

    # ------------------------------------------------------------ helpers

    def _note_new_item(self, item: FocusItem) -> None:
        self._pending_items.append(item)
        self._update_last_object(item)

    def _update_last_object(self, item: FocusItem) -> None:
        for n in item.payload.nodes:
            if n.kind is NodeKind.OBJECT and n.lex is None:
                self.last_object = n.id
                return

    def _say(self, speaker: str, text: str) -> None:
        self.transcript.append(TranscriptEntry(self.cycle, speaker, text))
        self.trace.emit("speech", f"{speaker}: {text}")

    # ------------------------------------------------------------ the loop

    def run(self, cycles: int = 1) -> None:
        for _ in range(cycles):
            self.run_cycle()

    def run_cycle(self) -> None:
        self.cycle += 1
        self.trace.set_cycle(self.cycle)

        # 1. world and continuous perception tick
        self.kernel.tick(self.cycle)
        for text in self.kernel.drain_speech():
            self._say("robot", text)

        # 2. grounding completions
        for notice in self.kernel.drain_notices():
            self.director.apply_notice(notice, self.cycle)

        # 3. queued posts: grounding first, then user instructions;
        #    items posted by directives last cycle join this pass
        new_items = list(self._pending_items)
        self._pending_items = []
        for post in self.kernel.drain_posts():
            item, created = self.memory.post(post.payload, post.kind,
                                             post.source, self.cycle,
                                             tag=post.tag)
            if created:
                self.trace.emit("attention",
                                f"post {post.tag.value} [{summary(post.payload)}] "
                                f"source={post.source.value}")
                new_items.append(item)
                self._update_last_object(item)
        for text in self._drain_instructions():
            self._apply_instruction(text, new_items)

        # 4. lifecycle; foci of live trees are exempt from expiry
        pinned = frozenset(t.focus_id for t in self.director.trees
                           if not t.is_terminal())
        self.memory.expire(self.cycle, pinned=pinned)

        # 5. recompute the halo from scratch
        facts = self.rules.derive(self.memory.working_view(), self.names,
                                  self.cfg.min_belief)
        keys = set()
        for f in facts:
            key = (f.rule_id, f.step, summary(f.graphlet))
            keys.add(key)
            if key not in self._halo_keys:
                self.trace.emit("halo",
                                f"derive [{summary(f.graphlet)}] rule={f.rule_id} "
                                f"step={f.step} belief={f.belief:.2f}")
        self._halo_keys = keys
        self.memory.set_halo(facts)

        # 6. event-driven satisfaction of waiting directives
        for item in new_items:
            self.director.on_attention_change(item, self.cycle)

        # 7. operator-match pass over unhandled foci (newest first)
        for item in list(self.memory.attention):
            if item.state is not FocusState.ACTIVE or item.handled:
                continue
            trees = self.director.spawn(item, self.cycle)
            item.handled = True
            if item.kind is FocusKind.ASSERTION:
                item.deactivate(self.cycle)
            else:
                self._focus_trees[item.id] = [t.id for t in trees]

        # 8. advance every live tree by one frontier transition
        before = len(self.trace.events)
        for tree in list(self.director.trees):
            if tree.is_terminal():
                continue
            n0 = len(self.trace.events)
            self.director.step(tree, self.cycle)
            if tree.is_terminal():
                self._finish_focus(tree)
            elif len(self.trace.events) == n0 and not self._waiting_on_fcn(tree):
                raise RuntimeError(f"watchdog: tree {tree.id} stalled silently")
        self._prune_trees()

    def _waiting_on_fcn(self, tree: ActionTree) -> bool:
        return any(d.kind is DirectiveKind.FCN
                   and d.status is DirectiveStatus.RUNNING for d in tree.walk())

    def _finish_focus(self, tree: ActionTree) -> None:
        """A command focus deactivates when its tree reaches a terminal
        state (assertions were deactivated after their match pass)."""
        ids = self._focus_trees.get(tree.focus_id)
        if ids is None:
            return
        live = [t for t in self.director.trees
                if t.id in ids and not t.is_terminal()]
        if live:
            return
        try:
            item = self.memory.item(tree.focus_id)
        except LookupError:
            return
        item.deactivate(self.cycle)

    def _prune_trees(self) -> None:
        # terminal trees stay visible for a while, then fall away
        horizon = 10 * self.cfg.linger
        self.director.trees = [
            t for t in self.director.trees
            if not t.is_terminal()
            or self.cycle - (t.finished_cycle or self.cycle) <= horizon]

    def _drain_instructions(self) -> List[str]:
        out, self._instr_queue = self._instr_queue, []
        return out

    def _apply_instruction(self, text: str, new_items: List[FocusItem]) -> None:
        self._say("user", text)
        out = self.language.understand(text, self.names, self.last_object)
        if isinstance(out, Rejection):
            self._say("agent", f"cannot interpret: {out.reason}")
            return
        try:
            if out.rule is not None:
                rid = self.rules.add(out.rule)
                self._say("agent", f"rule {rid} learned")
            elif out.operator is not None:
                oid = self.ops.add(out.operator)
                self._say("agent", f"operator {oid} learned")
            else:
                spec = out.focus
                item, created = self.memory.post(spec.payload, spec.kind,
                                                 FocusSource.USER, self.cycle,
                                                 tag=spec.tag,
                                                 provenance=out.sentence)
                if created:
                    self.trace.emit("attention",
                                    f"post {spec.tag.value} "
                                    f"[{summary(spec.payload)}] source=user")
                    new_items.append(item)
                    self._update_last_object(item)
        except (RuleError, OperatorError) as exc:
            self._say("agent", f"cannot learn that: {exc}")

    # ------------------------------------------------------------ export

    def snapshot(self) -> dict:
        mem = self.memory.snapshot(self.cycle)
        wm = mem.working
        believed_striped = set()
        for n in wm.nodes:
            if n.lex == "striped" and not n.negated and n.belief >= self.cfg.min_belief:
                for l in wm.out_links(n.id):
                    if l.role == "hq":
                        believed_striped.add(l.dst)
        snap = {
            "cycle": self.cycle,
            "seed": self.seed,
            "attention": [{
                "id": it.id, "kind": it.kind.value, "tag": it.tag.value,
                "state": it.state.value, "source": it.source.value,
                "born": it.born_cycle, "deactivated": it.deactivated_cycle,
                "text": summary(it.payload), "provenance": it.provenance,
            } for it in mem.attention],
            "working": {"render": render(wm).splitlines(),
                        "dump": dump(wm).splitlines()},
            "halo": [{
                "id": f.id, "rule": f.rule_id, "step": f.step,
                "belief": round(f.belief, 4), "text": summary(f.graphlet),
                "supports": list(f.supports),
            } for f in mem.halo],
            "trees": [self._tree_dict(t) for t in self.director.trees],
            "transcript": [{"cycle": e.cycle, "speaker": e.speaker,
                            "text": e.text} for e in self.transcript[-20:]],
            "events": [{"cycle": e.cycle, "seq": e.seq, "category": e.category,
                        "detail": e.detail} for e in self.trace.events
                       if e.cycle == self.cycle],
            "event_count": len(self.trace.events),
        }
        if self.world is not None:
            snap["world"] = {
                "bounds": list(self.world.bounds),
                "robot": {"x": self.world.robot.x, "y": self.world.robot.y,
                          "heading": self.world.robot.heading,
                          "gripper": self.world.robot.gripper,
                          "lift": self.world.robot.lift},
                "proximity_cm": self.cfg.proximity_cm,
                "arc_deg": self.cfg.arc_deg,
                "objects": [{
                    "id": o.oid, "x": o.x, "y": o.y, "radius": o.radius,
                    "tracked": o.tracked,
                    "fill": (classify_colors(o.pixels, self.cfg) or
                             [("gray", 0.0)])[0][0],
                    "striped": o.tracked in believed_striped,
                } for o in self.world.objects],
            }
        else:
            snap["world"] = None
        return snap

    def _tree_dict(self, tree: ActionTree) -> dict:
        def directive_dict(d):
            return {
                "id": d.id, "kind": d.kind.value, "status": d.status.value,
                "summary": summary(d.payload), "depth": d.depth,
                "note": d.note, "negative": d.negative,
                "children": [directive_dict(c) for c in d.children],
            }
        return {"id": tree.id, "focus": tree.focus_id, "mode": tree.mode,
                "status": tree.status.value, "cycles": tree.cycles_used,
                "roots": [directive_dict(d) for d in tree.roots]}
