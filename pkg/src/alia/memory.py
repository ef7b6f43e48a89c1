"""Three-level memory: attention buffer, working memory, halo.

Attention holds focal items (newest first). Working memory is the union
store of assertions linked to current or recently deactivated items; it
is garbage-collected by link reachability. The halo is installed fresh
each cycle by the inference module and is only read here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

from .config import EngineConfig
from .kinds import DirectiveKind
from .semnet import (
    Graphlet, NameGen, Node, RoleLink, StructuralError, dump,
    structurally_equal, union,
)

if TYPE_CHECKING:  # pragma: no cover
    from .inference import HaloFact


class FocusKind(Enum):
    ASSERTION = "assertion"
    COMMAND = "command"


class FocusState(Enum):
    ACTIVE = "active"
    DEACTIVATED = "deactivated"


class FocusSource(Enum):
    USER = "user"
    GROUNDING = "grounding"
    PROMOTION = "promotion"
    OPERATOR = "operator"


@dataclass
class FocusItem:
    id: str
    payload: Graphlet
    kind: FocusKind
    tag: DirectiveKind
    source: FocusSource
    born_cycle: int
    state: FocusState = FocusState.ACTIVE
    deactivated_cycle: Optional[int] = None
    provenance: str = ""
    handled: bool = False

    def deactivate(self, cycle: int) -> None:
        if self.state is FocusState.ACTIVE:
            self.state = FocusState.DEACTIVATED
            self.deactivated_cycle = max(cycle, self.born_cycle)


@dataclass
class MemorySnapshot:
    cycle: int
    attention: List[FocusItem]
    working: Graphlet
    halo: List["HaloFact"]

    def to_text(self) -> str:
        out = [f"cycle {self.cycle}", "attention:"]
        for it in self.attention:
            dc = "-" if it.deactivated_cycle is None else it.deactivated_cycle
            out.append(f"  item {it.id} {it.kind.value} {it.tag.value} "
                       f"{it.state.value} source={it.source.value} "
                       f"born={it.born_cycle} deactivated={dc}")
            out.extend("    " + line for line in dump(it.payload).splitlines())
        out.append("working:")
        out.extend("  " + line for line in dump(self.working).splitlines())
        out.append("halo:")
        for f in self.halo:
            out.append(f"  fact {f.id} rule={f.rule_id} step={f.step} "
                       f"belief={f.belief:.3f}")
            out.extend("    " + line for line in dump(f.graphlet).splitlines())
        return "\n".join(out)


class Memory:
    """Owned by the engine cycle loop; external producers post via queues
    drained at cycle start."""

    def __init__(self, config: EngineConfig, names: NameGen):
        self.config = config
        self.names = names
        self._attention: List[FocusItem] = []  # newest first
        self._nodes: Dict[str, Node] = {}
        self._links: Dict[Tuple[str, str, str], RoleLink] = {}
        self._halo: List["HaloFact"] = []
        self._halo_by_node: Dict[str, "HaloFact"] = {}

    # ------------------------------------------------------------ views

    @property
    def attention(self) -> Tuple[FocusItem, ...]:
        return tuple(self._attention)

    def working_view(self) -> Graphlet:
        return Graphlet(self._nodes.values(), self._links.values())

    def halo_facts(self) -> Tuple["HaloFact", ...]:
        return tuple(self._halo)

    def halo_view(self) -> Graphlet:
        if not self._halo:
            return Graphlet()
        return union(*(f.graphlet for f in self._halo))

    def known_ids(self) -> frozenset:
        return frozenset(self._nodes)

    def item(self, item_id: str) -> FocusItem:
        for it in self._attention:
            if it.id == item_id:
                return it
        raise LookupError(f"no attention item {item_id}")

    # ------------------------------------------------------------ posting

    def _merge(self, payload: Graphlet) -> None:
        for n in payload.nodes:
            old = self._nodes.get(n.id)
            if old is None or n.belief > old.belief:
                self._nodes[n.id] = n
        for l in payload.links:
            self._links.setdefault((l.src, l.role, l.dst), l)

    def post(self, payload: Graphlet, kind: FocusKind, source: FocusSource,
             cycle: int, tag: DirectiveKind = DirectiveKind.NOTE,
             provenance: str = "") -> Tuple[FocusItem, bool]:
        """Append a focal item, merging its payload into working memory.

        Structural re-posts of a live item's payload coalesce into that
        item; returns (item, created?).
        """
        if not payload:
            raise StructuralError("cannot post an empty graphlet")
        grounded = self.known_ids()
        for it in self._attention:
            if it.tag is tag and structurally_equal(payload, it.payload,
                                                    grounded=grounded):
                self._merge(payload)
                return it, False
        self._merge(payload)
        item = FocusItem(self.names.fresh("item"), payload, kind, tag,
                         source, cycle, provenance=provenance)
        self._attention.insert(0, item)
        return item, True

    def maintain(self, payload: Graphlet) -> None:
        """Re-assert a payload's facts (KEEP semantics): re-merge without
        creating an attention item."""
        self._merge(payload)

    # ------------------------------------------------------------ halo

    def set_halo(self, facts: Sequence["HaloFact"]) -> None:
        """Install the freshly derived halo, discarding the previous one."""
        self._halo = list(facts)
        self._halo_by_node = {}
        for f in self._halo:
            for nid in f.graphlet.node_ids():
                if nid not in self._nodes:
                    self._halo_by_node.setdefault(nid, f)

    def halo_fact_for_node(self, nid: str) -> Optional["HaloFact"]:
        return self._halo_by_node.get(nid)

    def promote(self, fact: "HaloFact", cycle: int) -> Tuple[FocusItem, bool]:
        """Copy a halo fact into working memory and post it to attention.

        The halo entry itself stays; it disappears on the next derivation
        because the fact is now conscious.
        """
        if fact not in self._halo:
            raise LookupError(f"halo fact {fact.id} is not in the current halo")
        chain = f"rule {fact.rule_id} step {fact.step}"
        if fact.supports:
            chain += " via " + ",".join(fact.supports)
        item, created = self.post(fact.graphlet, FocusKind.ASSERTION,
                                  FocusSource.PROMOTION, cycle,
                                  provenance=chain)
        return item, created

    # ------------------------------------------------------------ lifecycle

    def expire(self, cycle: int, pinned: Optional[frozenset] = None) -> int:
        """Drop items deactivated more than `linger` cycles ago, then
        garbage-collect working-memory facts unreachable from any
        remaining item. Items in `pinned` (foci whose action trees are
        still running) are exempt: an ongoing intention keeps its
        stimulus alive."""
        linger = self.config.linger
        pinned = pinned or frozenset()
        keep: List[FocusItem] = []
        removed = 0
        for it in self._attention:
            if (it.id not in pinned
                    and it.state is FocusState.DEACTIVATED
                    and it.deactivated_cycle is not None
                    and cycle - it.deactivated_cycle >= linger):
                removed += 1
            else:
                keep.append(it)
        self._attention = keep

        roots = set()
        for it in self._attention:
            roots.update(it.payload.node_ids())
        reachable = set(r for r in roots if r in self._nodes)
        frontier = list(reachable)
        adj: Dict[str, List[str]] = {}
        for (src, _r, dst) in self._links:
            adj.setdefault(src, []).append(dst)
            adj.setdefault(dst, []).append(src)
        while frontier:
            nid = frontier.pop()
            for nb in adj.get(nid, ()):
                if nb not in reachable:
                    reachable.add(nb)
                    frontier.append(nb)
        self._nodes = {k: v for k, v in self._nodes.items() if k in reachable}
        self._links = {k: v for k, v in self._links.items()
                       if k[0] in reachable and k[2] in reachable}
        return removed

    # ------------------------------------------------------------ export

    def snapshot(self, cycle: int) -> MemorySnapshot:
        return MemorySnapshot(cycle, list(self._attention),
                              self.working_view(), list(self._halo))
