"""Directive interpreter and action trees.

Operator bodies expand into directive sequences; FIND/CHK run
satisfaction loops with candidate backtracking; FCN and grounded DO
dispatch to the grounding kernel; success and failure propagate up the
tree. Each live tree advances by one frontier transition per cycle;
grounding completions and attention-driven satisfactions arrive as
additional event-driven transitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .config import EngineConfig
from .grounding.kernel import GroundingKernel, Invocation
from .grounding.motor import Notice
from .inference import HaloFact
from .kinds import DirectiveKind
from .memory import FocusItem, FocusKind, FocusSource, Memory
from .policy import Candidate, Operator, OperatorBase
from .semnet import (
    Graphlet, NameGen, Node, NodeKind, canonical_signature, instantiate,
    match, summary,
)


class DirectiveStatus(Enum):
    PENDING = "pending"
    RUNNING = "running"
    SUCCEEDED = "succeeded"
    FAILED = "failed"

TERMINAL = (DirectiveStatus.SUCCEEDED, DirectiveStatus.FAILED)

GOAL_KINDS = (DirectiveKind.CHK, DirectiveKind.FIND, DirectiveKind.ACH)
ACT_KINDS = (DirectiveKind.DO, DirectiveKind.ANTE, DirectiveKind.POST)


@dataclass
class Directive:
    id: str
    kind: DirectiveKind
    payload: Graphlet
    fcn: Optional[Invocation] = None
    status: DirectiveStatus = DirectiveStatus.PENDING
    children: List["Directive"] = field(default_factory=list)
    chosen: List[Tuple[str, Tuple]] = field(default_factory=list)
    candidates: Optional[List[Candidate]] = None
    negative: bool = False      # CHK resolved by finding the negation
    note: str = ""
    depth: int = 0
    seq: int = 0                # activation stamp
    parent: Optional["Directive"] = None
    origin: Optional[Tuple[str, Tuple]] = None  # candidate that spawned it

    def is_terminal(self) -> bool:
        return self.status in TERMINAL


@dataclass
class ActionTree:
    id: str
    focus_id: str
    mode: str                   # "reaction" | "command"
    created_cycle: int
    status: DirectiveStatus = DirectiveStatus.RUNNING
    roots: List[Directive] = field(default_factory=list)
    candidates: Optional[List[Candidate]] = None
    chosen: List[Tuple[str, Tuple]] = field(default_factory=list)
    cycles_used: int = 0
    finished_cycle: Optional[int] = None

    def is_terminal(self) -> bool:
        return self.status in TERMINAL

    def walk(self) -> Iterator[Directive]:
        stack = list(reversed(self.roots))
        while stack:
            d = stack.pop()
            yield d
            stack.extend(reversed(d.children))


def negate_predicates(g: Graphlet) -> Graphlet:
    nodes = [Node(n.id, n.kind, n.lex, n.belief, not n.negated)
             if n.kind is NodeKind.PREDICATE else n for n in g.nodes]
    return Graphlet(nodes, g.links)


PROBE_PREFIX = "fcn:"


class Director:
    def __init__(self, memory: Memory, ops: OperatorBase,
                 kernel: GroundingKernel, rng, names: NameGen,
                 cfg: EngineConfig,
                 emit: Callable[[str, str], None],
                 on_new_item: Callable[[FocusItem], None]):
        self.memory = memory
        self.ops = ops
        self.kernel = kernel
        self.rng = rng
        self.names = names
        self.cfg = cfg
        self.emit = emit
        self.on_new_item = on_new_item
        self.trees: List[ActionTree] = []
        self._seq = 0
        self._cycle = 0

    # ------------------------------------------------------------ helpers

    def _stamp(self) -> int:
        self._seq += 1
        return self._seq

    def _event(self, tree: ActionTree, d: Directive, old: str, new: str,
               extra: str = "") -> None:
        tail = f" {extra}" if extra else ""
        self.emit("directive",
                  f"{tree.id} {d.kind.value} [{summary(d.payload)}] {old}->{new}{tail}")

    def live_trees(self) -> List[ActionTree]:
        return [t for t in self.trees if not t.is_terminal()]

    def _context(self):
        wm = self.memory.working_view()
        halo = self.memory.halo_view()
        return wm, halo

    def _post_note(self, payload: Graphlet) -> None:
        item, created = self.memory.post(payload, FocusKind.ASSERTION,
                                         FocusSource.OPERATOR, self._cycle)
        if created:
            self.emit("attention", f"post NOTE [{summary(payload)}] source=operator")
            self.on_new_item(item)

    def _promote(self, fact: HaloFact) -> None:
        item, created = self.memory.promote(fact, self._cycle)
        if created:
            self.emit("attention",
                      f"promote [{summary(fact.graphlet)}] {item.provenance}")
            self.on_new_item(item)

    # ------------------------------------------------------------ spawning

    def spawn(self, focus: FocusItem, cycle: int) -> List[ActionTree]:
        """Create trees reacting to an unhandled focus. Commands spawn one
        tree; assertions spawn one tree per structurally-distinct trigger
        family with at least one applicable operator."""
        self._cycle = cycle
        wm, halo = self._context()
        spawned: List[ActionTree] = []
        if focus.kind is FocusKind.COMMAND:
            root = Directive(self.names.fresh("d"), focus.tag, focus.payload)
            tree = ActionTree(self.names.fresh("tree"), focus.id, "command",
                              cycle, roots=[root])
            spawned.append(tree)
        else:
            cands = self.ops.applicable(focus.tag, focus.payload, wm, halo,
                                        self.cfg.min_belief)
            groups: Dict[str, List[Candidate]] = {}
            for c in cands:
                op = self.ops.get(c.op_id)
                sig = op.trigger.kind.value + "|" + canonical_signature(op.trigger.pattern)
                groups.setdefault(sig, []).append(c)
            for sig, group in groups.items():
                ordered = OperatorBase.order(group, self.rng)
                tree = ActionTree(self.names.fresh("tree"), focus.id, "reaction",
                                  cycle, candidates=ordered)
                spawned.append(tree)
        for tree in spawned:
            self.trees.append(tree)
            self.emit("directive", f"{tree.id} spawn focus={focus.id} mode={tree.mode}")
        return spawned

    # ------------------------------------------------------------ events

    def apply_notice(self, notice: Notice, cycle: int) -> None:
        """Grounding completion: resolve the waiting FCN directive."""
        self._cycle = cycle
        for tree in self.live_trees():
            for d in tree.walk():
                if d.id == notice.caller and d.kind is DirectiveKind.FCN \
                        and d.status is DirectiveStatus.RUNNING:
                    d.status = (DirectiveStatus.SUCCEEDED if notice.ok
                                else DirectiveStatus.FAILED)
                    d.note = notice.detail
                    self._event(tree, d, "running", d.status.value,
                                extra=notice.detail)
                    self.emit("grounding",
                              f"{d.fcn.fcn if d.fcn else '?'} "
                              f"{'ok' if notice.ok else 'fail'} {notice.detail}")
                    return

    def on_attention_change(self, item: FocusItem, cycle: int) -> List[str]:
        """Match a new attention item against waiting CHK/FIND directives;
        the most proximate (deepest, most recently activated) match is
        satisfied. Returns the satisfied directive ids."""
        self._cycle = cycle
        waiting: List[Tuple[int, int, ActionTree, Directive]] = []
        for tree in self.live_trees():
            for d in tree.walk():
                if d.status is DirectiveStatus.RUNNING and d.kind in (
                        DirectiveKind.CHK, DirectiveKind.FIND):
                    waiting.append((d.depth, d.seq, tree, d))
        waiting.sort(key=lambda t: (-t[0], -t[1]))
        known = self.memory.known_ids()
        for _depth, _seq, tree, d in waiting:
            grounded = {nid for nid in d.payload.node_ids() if nid in known}
            for _b in match(d.payload, item.payload, self.cfg.min_belief,
                            grounded=grounded):
                d.status = DirectiveStatus.SUCCEEDED
                d.note = "satisfied by attention"
                self._event(tree, d, "running", "succeeded", extra=d.note)
                return [d.id]
            if d.kind is DirectiveKind.CHK:
                for _b in match(negate_predicates(d.payload), item.payload,
                                self.cfg.min_belief, grounded=grounded):
                    d.status = DirectiveStatus.SUCCEEDED
                    d.negative = True
                    d.note = "negation satisfied by attention"
                    self._event(tree, d, "running", "succeeded", extra=d.note)
                    return [d.id]
        return []

    # ------------------------------------------------------------ stepping

    def step(self, tree: ActionTree, cycle: int) -> None:
        """Advance one frontier directive of the tree by one transition."""
        if tree.is_terminal():
            return
        self._cycle = cycle
        tree.cycles_used += 1
        if tree.cycles_used > self.cfg.tree_budget:
            tree.status = DirectiveStatus.FAILED
            tree.finished_cycle = cycle
            self.emit("directive", f"{tree.id} tree failed budget-exhausted")
            return

        if not tree.roots:
            self._dispatch_tree_candidate(tree)
        else:
            st = self._seq_status(tree.roots)
            if st == "succeeded":
                self._cancel_keeps(tree, tree.roots)
                tree.status = DirectiveStatus.SUCCEEDED
                self.emit("directive", f"{tree.id} tree succeeded")
            elif st == "failed":
                if tree.mode == "reaction":
                    tree.roots = []
                    self._dispatch_tree_candidate(tree)
                else:
                    tree.status = DirectiveStatus.FAILED
                    self.emit("directive", f"{tree.id} tree failed")
            else:
                self._advance_sequence(tree, tree.roots)
        if tree.is_terminal() and tree.finished_cycle is None:
            tree.finished_cycle = cycle

    def _dispatch_tree_candidate(self, tree: ActionTree) -> None:
        if not tree.candidates:
            tree.status = DirectiveStatus.FAILED
            self.emit("directive", f"{tree.id} tree failed no-candidates")
            return
        cand = tree.candidates.pop(0)
        key = (cand.op_id, cand.binding)
        tree.chosen.append(key)
        op = self.ops.get(cand.op_id)
        tree.roots = self._instantiate_body(op, cand, parent=None)
        self.emit("directive", f"{tree.id} try operator {cand.op_id}")

    # sequence handling ------------------------------------------------

    @staticmethod
    def _seq_status(dirs: Sequence[Directive]) -> str:
        for d in dirs:
            if d.kind is not DirectiveKind.KEEP and d.status is DirectiveStatus.FAILED:
                return "failed"
        for d in dirs:
            if d.kind is DirectiveKind.KEEP:
                if d.status is DirectiveStatus.FAILED:
                    return "failed"
                continue
            if not d.is_terminal():
                return "running"
        return "succeeded"

    def _cancel_keeps(self, tree: ActionTree, dirs: Sequence[Directive]) -> None:
        for d in dirs:
            if d.kind is DirectiveKind.KEEP and d.status is DirectiveStatus.RUNNING:
                d.status = DirectiveStatus.SUCCEEDED
                d.note = "cancelled by parent completion"
                self._event(tree, d, "running", "succeeded", extra=d.note)

    def _advance_sequence(self, tree: ActionTree, dirs: List[Directive]) -> None:
        # maintain running KEEPs first; an unmaintainable payload fails the branch
        for d in dirs:
            if d.kind is DirectiveKind.KEEP and d.status is DirectiveStatus.RUNNING:
                if self._find_binding(d.payload) is None:
                    d.status = DirectiveStatus.FAILED
                    d.note = "payload no longer holds"
                    self._event(tree, d, "running", "failed", extra=d.note)
                    return
                self.memory.maintain(d.payload)
        for d in dirs:
            if d.status is DirectiveStatus.PENDING:
                self._activate(tree, d)
                return
            if d.status is DirectiveStatus.RUNNING and d.kind is not DirectiveKind.KEEP:
                self._progress(tree, d)
                return

    # directive transitions --------------------------------------------

    def _activate(self, tree: ActionTree, d: Directive) -> None:
        d.seq = self._stamp()
        if d.kind is DirectiveKind.NOTE:
            self._post_note(d.payload)
            d.status = DirectiveStatus.SUCCEEDED
            self._event(tree, d, "pending", "succeeded", extra="posted")
        elif d.kind is DirectiveKind.PUNT:
            d.status = DirectiveStatus.FAILED
            d.note = "punt"
            self._event(tree, d, "pending", "failed", extra="punt")
        elif d.kind is DirectiveKind.FCN:
            if d.fcn is None or not self.kernel.knows(d.fcn.fcn):
                d.status = DirectiveStatus.FAILED
                d.note = f"unknown grounding function {d.fcn.fcn if d.fcn else '?'}"
                self._event(tree, d, "pending", "failed", extra=d.note)
                return
            d.status = DirectiveStatus.RUNNING
            self._event(tree, d, "pending", "running", extra=d.fcn.fcn)
            self.emit("grounding", f"invoke {d.fcn.fcn} caller={d.id}")
            self.kernel.invoke(d.fcn, d.id)
        elif d.kind is DirectiveKind.KEEP:
            if self._find_binding(d.payload) is None:
                d.status = DirectiveStatus.FAILED
                d.note = "payload does not hold"
                self._event(tree, d, "pending", "failed", extra=d.note)
                return
            self.memory.maintain(d.payload)
            d.status = DirectiveStatus.RUNNING
            self._event(tree, d, "pending", "running")
        else:
            d.status = DirectiveStatus.RUNNING
            self._event(tree, d, "pending", "running")

    def _progress(self, tree: ActionTree, d: Directive) -> None:
        if d.kind in GOAL_KINDS:
            if self._try_satisfy(tree, d):
                return
        if d.children:
            st = self._seq_status(d.children)
            if st == "running":
                self._advance_sequence(tree, d.children)
                return
            self._cancel_keeps(tree, d.children)
            if st == "succeeded" and d.kind in ACT_KINDS:
                d.status = DirectiveStatus.SUCCEEDED
                self._event(tree, d, "running", "succeeded")
                return
            # goal-like directive, or act whose candidate failed:
            d.children = []
            if d.kind in ACT_KINDS or d.kind in GOAL_KINDS:
                self._dispatch_next(tree, d)
            return
        if d.kind is DirectiveKind.FCN:
            return  # waiting on the kernel
        if d.candidates is None:
            self._collect_candidates(d)
        self._dispatch_next(tree, d)

    def _try_satisfy(self, tree: ActionTree, d: Directive) -> bool:
        """Goal check against working memory plus halo, promoting any halo
        facts that complete the match."""
        found = self._find_binding(d.payload)
        negative = False
        if found is None and d.kind is DirectiveKind.CHK:
            found = self._find_binding(negate_predicates(d.payload))
            negative = found is not None
        if found is None:
            return False
        binding, halo_facts = found
        for fact in halo_facts:
            self._promote(fact)
        d.status = DirectiveStatus.SUCCEEDED
        d.negative = negative
        extra = "negative" if negative else "established"
        self._event(tree, d, "running", "succeeded", extra=extra)
        return True

    def _find_binding(self, pattern: Graphlet):
        """First match of the pattern over WM + halo, with the halo facts
        that contributed. None when no match."""
        wm, halo = self._context()
        store = [wm, halo] if halo else wm
        for binding in match(pattern, store, self.cfg.min_belief):
            facts = []
            for sid in binding.values():
                if not wm.has_node(sid):
                    fact = self.memory.halo_fact_for_node(sid)
                    if fact is not None and fact not in facts:
                        facts.append(fact)
            return binding, facts
        return None

    # candidate machinery -----------------------------------------------

    def _running_origins(self, d: Directive) -> set:
        out = set()
        node = d
        while node is not None:
            if node.origin is not None:
                out.add(node.origin)
            node = node.parent
        return out

    def _collect_candidates(self, d: Directive) -> None:
        cands: List[Candidate] = []
        probe_kind = DirectiveKind.DO if d.kind in ACT_KINDS else d.kind
        inv = self.kernel.probe(probe_kind, d.payload)
        if inv is not None:
            cands.append(Candidate(PROBE_PREFIX + inv.fcn, inv.args, 1.0))
        if d.kind in ACT_KINDS and inv is not None:
            # a grounded verb dispatches straight to the kernel
            d.candidates = cands
            return
        wm, halo = self._context()
        policy_cands = self.ops.applicable(probe_kind, d.payload, wm, halo,
                                           self.cfg.min_belief)
        cands.extend(OperatorBase.order(policy_cands, self.rng))
        d.candidates = cands

    def _dispatch_next(self, tree: ActionTree, d: Directive) -> None:
        if d.candidates is None:
            d.candidates = []
        exclude = self._running_origins(d)
        while d.candidates:
            cand = d.candidates.pop(0)
            key = (cand.op_id, cand.binding)
            if key in d.chosen or key in exclude:
                continue
            d.chosen.append(key)
            if d.depth + 1 > self.cfg.max_depth:
                d.status = DirectiveStatus.FAILED
                d.note = "depth limit"
                self._event(tree, d, "running", "failed", extra=d.note)
                return
            if cand.op_id.startswith(PROBE_PREFIX):
                child = Directive(self.names.fresh("d"), DirectiveKind.FCN,
                                  d.payload,
                                  fcn=Invocation(cand.op_id[len(PROBE_PREFIX):],
                                                 cand.binding),
                                  depth=d.depth + 1, parent=d, origin=key)
                d.children = [child]
            else:
                op = self.ops.get(cand.op_id)
                d.children = self._instantiate_body(op, cand, parent=d)
            self._event(tree, d, "running", "running",
                        extra=f"try {cand.op_id}")
            return
        d.status = DirectiveStatus.FAILED
        d.note = "exhausted" if d.chosen else "no way to proceed"
        self._event(tree, d, "running", "failed", extra=d.note)

    def _instantiate_body(self, op: Operator, cand: Candidate,
                          parent: Optional[Directive]) -> List[Directive]:
        binding = cand.binding_map()
        depth = (parent.depth + 1) if parent else 0
        key = (cand.op_id, cand.binding)
        ante, main, post = [], [], []
        for tmpl in op.body:
            payload = instantiate(tmpl.pattern, binding, 1.0,
                                  fresh=op.fresh, names=self.names)
            child = Directive(self.names.fresh("d"), tmpl.kind, payload,
                              fcn=Invocation(tmpl.fcn) if tmpl.fcn else None,
                              depth=depth, parent=parent, origin=key)
            if tmpl.kind is DirectiveKind.ANTE:
                ante.append(child)
            elif tmpl.kind is DirectiveKind.POST:
                post.append(child)
            else:
                main.append(child)
        return ante + main + post
