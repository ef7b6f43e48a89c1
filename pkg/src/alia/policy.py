"""Operator store and selection: triggers gate on attention items,
enablements consult working memory and the halo, and candidate order is
drawn probabilistically from preference weights."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .kinds import TRIGGER_KINDS, DirectiveKind
from .semnet import Binding, Graphlet, NameGen, match, union


class OperatorError(ValueError):
    """An operator violated its construction invariants."""


@dataclass(frozen=True)
class Trigger:
    kind: DirectiveKind
    pattern: Graphlet


@dataclass(frozen=True)
class DirectiveTemplate:
    kind: DirectiveKind
    pattern: Graphlet
    fcn: Optional[str] = None  # explicit grounding-function name for FCN


@dataclass(frozen=True)
class Operator:
    id: str
    trigger: Trigger
    enablement: Optional[Graphlet]
    body: Tuple[DirectiveTemplate, ...]
    preference: float = 1.0
    provenance: str = ""
    fresh: FrozenSet[str] = frozenset()

    def bound_vars(self) -> FrozenSet[str]:
        ids = set(self.trigger.pattern.node_ids())
        if self.enablement is not None:
            ids.update(self.enablement.node_ids())
        return frozenset(ids)


@dataclass(frozen=True)
class Candidate:
    op_id: str
    binding: Tuple[Tuple[str, str], ...]  # frozen form of the binding map
    weight: float

    def binding_map(self) -> Binding:
        return dict(self.binding)


def freeze(binding: Binding) -> Tuple[Tuple[str, str], ...]:
    return tuple(sorted(binding.items()))


class OperatorBase:
    """Insertion-ordered operator store."""

    def __init__(self, names: Optional[NameGen] = None):
        self.names = names or NameGen()
        self._ops: Dict[str, Operator] = {}

    def __len__(self) -> int:
        return len(self._ops)

    def __iter__(self):
        return iter(self._ops.values())

    def get(self, op_id: str) -> Operator:
        return self._ops[op_id]

    def add(self, op: Operator) -> str:
        if op.trigger.kind not in TRIGGER_KINDS:
            raise OperatorError(f"{op.trigger.kind.value} cannot be a trigger kind")
        if not op.body:
            raise OperatorError("operator body is empty")
        if not 0.0 < op.preference <= 1.0:
            raise OperatorError(f"preference {op.preference} outside (0,1]")
        if not op.trigger.pattern:
            raise OperatorError("trigger pattern is empty")
        allowed = set(op.bound_vars()) | set(op.fresh)
        for tmpl in op.body:
            for nid in tmpl.pattern.node_ids():
                if nid not in allowed:
                    raise OperatorError(f"unbound body variable {nid}")
        for old in self._ops.values():
            if self._same(op, old):
                if op.preference > old.preference:
                    self._ops[old.id] = Operator(
                        old.id, old.trigger, old.enablement, old.body,
                        op.preference, old.provenance, old.fresh)
                return old.id
        oid = op.id or self.names.fresh("op")
        self._ops[oid] = Operator(oid, op.trigger, op.enablement, op.body,
                                  op.preference, op.provenance, op.fresh)
        return oid

    @staticmethod
    def _same(a: Operator, b: Operator) -> bool:
        from .semnet import canonical_signature, structurally_equal
        if a.trigger.kind is not b.trigger.kind or len(a.body) != len(b.body):
            return False
        if (a.enablement is None) != (b.enablement is None):
            return False
        if not structurally_equal(a.trigger.pattern, b.trigger.pattern):
            return False
        if a.enablement is not None and not structurally_equal(a.enablement,
                                                               b.enablement):
            return False
        for ta, tb in zip(a.body, b.body):
            if ta.kind is not tb.kind or ta.fcn != tb.fcn:
                return False
            if canonical_signature(ta.pattern) != canonical_signature(tb.pattern):
                return False
        return True

    # ------------------------------------------------------------ selection

    def applicable(self, tag: DirectiveKind, payload: Graphlet,
                   working: Graphlet, halo: Optional[Graphlet] = None,
                   min_belief: float = 0.5) -> List[Candidate]:
        """All operators whose trigger kind and pattern match the focus and
        whose enablement (if any) matches working memory plus halo."""
        out: List[Candidate] = []
        context = None
        for op in self._ops.values():
            if op.trigger.kind is not tag:
                continue
            for tb in match(op.trigger.pattern, payload, min_belief,
                            grounded=set()):
                if op.enablement is None:
                    out.append(Candidate(op.id, freeze(tb), op.preference))
                    continue
                if context is None:
                    context = union(working, halo) if halo else working
                seed = {nid: tb[nid] for nid in op.enablement.node_ids()
                        if nid in tb}
                for eb in match(op.enablement, context, min_belief, seed=seed):
                    combined = dict(tb)
                    combined.update(eb)
                    out.append(Candidate(op.id, freeze(combined), op.preference))
        return out

    @staticmethod
    def order(candidates: Sequence[Candidate],
              rng: Union[int, random.Random]) -> List[Candidate]:
        """Sample without replacement, each draw proportional to the
        remaining weights. Deterministic for a fixed seed."""
        if isinstance(rng, int):
            rng = random.Random(rng)
        pool = list(candidates)
        out: List[Candidate] = []
        while pool:
            total = sum(c.weight for c in pool)
            r = rng.random() * total
            acc = 0.0
            chosen = len(pool) - 1
            for i, c in enumerate(pool):
                acc += c.weight
                if r < acc:
                    chosen = i
                    break
            out.append(pool.pop(chosen))
        return out
