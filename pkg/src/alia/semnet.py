"""Semantic-network primitives: nodes, role links, graphlets, and the
binding-based subgraph matcher used for conditions, triggers, and queries."""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union


class StructuralError(ValueError):
    """A graphlet operation violated a structural contract."""


class NodeKind(Enum):
    OBJECT = "obj"
    PREDICATE = "pred"


# Role labels come from a finite registry; hq (has-quality) and ako
# (a-kind-of) are always present.
_CORE_ROLES = ("hq", "ako", "agt", "obj", "dir", "arg", "loc")
_roles: Set[str] = set(_CORE_ROLES)


def register_role(role: str) -> None:
    _roles.add(role)


def known_roles() -> frozenset:
    return frozenset(_roles)


def norm_lex(lex: str) -> str:
    """Canonical lexical form: lowercased, whitespace collapsed."""
    return " ".join(lex.lower().split())


@dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind
    lex: Optional[str] = None
    belief: float = 1.0
    negated: bool = False

    def __post_init__(self):
        if not self.id:
            raise StructuralError("node id must be nonempty")
        if not 0.0 <= self.belief <= 1.0:
            raise StructuralError(f"belief {self.belief} outside [0,1]")
        if self.lex is not None:
            object.__setattr__(self, "lex", norm_lex(self.lex))


@dataclass(frozen=True)
class RoleLink:
    src: str
    role: str
    dst: str

    def __post_init__(self):
        if self.role not in _roles:
            raise StructuralError(f"unregistered role {self.role!r}")


class Graphlet:
    """A small, closed semantic network. Immutable after construction."""

    __slots__ = ("_nodes", "_links", "_out", "_in", "_linkset")

    def __init__(self, nodes: Iterable[Node] = (), links: Iterable[RoleLink] = ()):
        self._nodes: Dict[str, Node] = {}
        for n in nodes:
            if n.id in self._nodes:
                raise StructuralError(f"duplicate node id {n.id}")
            self._nodes[n.id] = n
        self._links: Tuple[RoleLink, ...] = tuple(dict.fromkeys(links))
        self._out: Dict[str, List[RoleLink]] = {}
        self._in: Dict[str, List[RoleLink]] = {}
        for l in self._links:
            if l.src not in self._nodes or l.dst not in self._nodes:
                raise StructuralError(f"link {l} dangles outside the graphlet")
            self._out.setdefault(l.src, []).append(l)
            self._in.setdefault(l.dst, []).append(l)
        self._linkset = frozenset((l.src, l.role, l.dst) for l in self._links)

    @property
    def nodes(self) -> Tuple[Node, ...]:
        return tuple(self._nodes.values())

    @property
    def links(self) -> Tuple[RoleLink, ...]:
        return self._links

    def node(self, nid: str) -> Node:
        return self._nodes[nid]

    def has_node(self, nid: str) -> bool:
        return nid in self._nodes

    def has_link(self, src: str, role: str, dst: str) -> bool:
        return (src, role, dst) in self._linkset

    def out_links(self, nid: str) -> Tuple[RoleLink, ...]:
        return tuple(self._out.get(nid, ()))

    def in_links(self, nid: str) -> Tuple[RoleLink, ...]:
        return tuple(self._in.get(nid, ()))

    def node_ids(self) -> Tuple[str, ...]:
        return tuple(self._nodes)

    def __len__(self) -> int:
        return len(self._nodes)

    def __bool__(self) -> bool:
        return bool(self._nodes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graphlet):
            return NotImplemented
        return self._nodes == other._nodes and set(self._links) == set(other._links)

    def __hash__(self):
        return hash((frozenset(self._nodes.items()), self._linkset))

    def __repr__(self):
        return f"Graphlet({len(self._nodes)} nodes, {len(self._links)} links)"


StoreLike = Union[Graphlet, Sequence[Graphlet]]


def union(*graphlets: Graphlet) -> Graphlet:
    """Merge graphlets; on node-id collision the earliest entry wins."""
    nodes: Dict[str, Node] = {}
    links: List[RoleLink] = []
    for g in graphlets:
        for n in g.nodes:
            nodes.setdefault(n.id, n)
        links.extend(g.links)
    return Graphlet(nodes.values(), links)


def _as_graphlet(store: StoreLike) -> Graphlet:
    if isinstance(store, Graphlet):
        return store
    return union(*store)


class NameGen:
    """Engine-wide fresh-name source: `<lex-or-kind>-<counter>`, never reused."""

    def __init__(self, start: int = 0):
        self._n = start

    def fresh(self, prefix: str = "n") -> str:
        self._n += 1
        slug = re.sub(r"\s+", "_", prefix.strip()) or "n"
        return f"{slug}-{self._n}"

    def for_node(self, kind: NodeKind, lex: Optional[str]) -> str:
        if lex:
            return self.fresh(lex)
        return self.fresh("obj" if kind is NodeKind.OBJECT else "pred")

    @property
    def counter(self) -> int:
        return self._n


class Builder:
    """Convenience constructor for graphlets."""

    def __init__(self, names: Optional[NameGen] = None):
        self.names = names or NameGen()
        self._nodes: List[Node] = []
        self._links: List[RoleLink] = []

    def add(self, node: Node) -> str:
        self._nodes.append(node)
        return node.id

    def obj(self, lex: Optional[str] = None, *, id: Optional[str] = None,
            belief: float = 1.0, negated: bool = False) -> str:
        nid = id or self.names.for_node(NodeKind.OBJECT, lex)
        return self.add(Node(nid, NodeKind.OBJECT, lex, belief, negated))

    def pred(self, lex: Optional[str] = None, *, id: Optional[str] = None,
             belief: float = 1.0, negated: bool = False) -> str:
        nid = id or self.names.for_node(NodeKind.PREDICATE, lex)
        return self.add(Node(nid, NodeKind.PREDICATE, lex, belief, negated))

    def link(self, src: str, role: str, dst: str) -> "Builder":
        self._links.append(RoleLink(src, role, dst))
        return self

    def fact(self, lex: str, role: str, target: str, **kw) -> str:
        """Shortcut: new predicate node with a single role link to target."""
        p = self.pred(lex, **kw)
        self.link(p, role, target)
        return p

    def build(self) -> Graphlet:
        return Graphlet(self._nodes, self._links)


Binding = Dict[str, str]


def _compatible(pn: Node, sn: Node, min_belief: float) -> bool:
    if pn.kind is not sn.kind:
        return False
    if pn.lex is not None and sn.lex != pn.lex:
        return False
    if pn.negated != sn.negated:
        return False
    if sn.belief < min_belief:
        return False
    return True


def match(pattern: Graphlet, store: StoreLike, min_belief: float = 0.5, *,
          seed: Optional[Binding] = None,
          grounded: Optional[Set[str]] = None) -> Iterator[Binding]:
    """Yield every binding of pattern nodes onto store nodes.

    A pattern node maps to a store node of equal kind and negation, with
    equal lex whenever the pattern node carries one, and belief >=
    min_belief; every pattern link must map onto a store link with the
    same role. Predicate-node images are pairwise distinct within one
    binding. Pattern nodes whose id is `grounded` (default: any id already
    present in the store) must map to themselves. Enumeration follows
    store insertion order, so results are deterministic.
    """
    store_g = _as_graphlet(store)
    if grounded is None:
        grounded = {nid for nid in pattern.node_ids() if store_g.has_node(nid)}
    pnodes = list(pattern.nodes)
    snodes = list(store_g.nodes)
    seed = dict(seed or {})

    def links_ok(pid: str, sid: str, bound: Binding) -> bool:
        for l in pattern.out_links(pid):
            if l.dst in bound and not store_g.has_link(sid, l.role, bound[l.dst]):
                return False
        for l in pattern.in_links(pid):
            if l.src in bound and not store_g.has_link(bound[l.src], l.role, sid):
                return False
        return True

    def extend(i: int, bound: Binding, used_preds: Set[str]) -> Iterator[Binding]:
        if i == len(pnodes):
            yield dict(bound)
            return
        pn = pnodes[i]
        if pn.id in bound:  # seeded
            sid = bound[pn.id]
            if store_g.has_node(sid) and _compatible(pn, store_g.node(sid), min_belief) \
                    and links_ok(pn.id, sid, bound):
                yield from extend(i + 1, bound, used_preds)
            return
        if pn.id in grounded:
            if not store_g.has_node(pn.id):
                return
            cands = [store_g.node(pn.id)]
        else:
            cands = snodes
        for sn in cands:
            if pn.id in grounded and sn.id != pn.id:
                continue
            if not _compatible(pn, sn, min_belief):
                continue
            if pn.kind is NodeKind.PREDICATE and sn.id in used_preds:
                continue
            if not links_ok(pn.id, sn.id, bound):
                continue
            bound[pn.id] = sn.id
            if pn.kind is NodeKind.PREDICATE:
                used_preds.add(sn.id)
                yield from extend(i + 1, bound, used_preds)
                used_preds.discard(sn.id)
            else:
                yield from extend(i + 1, bound, used_preds)
            del bound[pn.id]

    used0 = {v for k, v in seed.items()
             if pattern.has_node(k) and pattern.node(k).kind is NodeKind.PREDICATE}
    yield from extend(0, dict(seed), used0)


def instantiate(template: Graphlet, binding: Binding, belief_scale: float, *,
                fresh: Iterable[str] = (), names: Optional[NameGen] = None) -> Graphlet:
    """Realize a template under a binding.

    Bound nodes are substituted; nodes listed in `fresh` get new ids from
    `names`. Any other unbound node is a structural error. Node beliefs
    become template belief x belief_scale, clamped to [0,1].
    """
    names = names or NameGen()
    fresh = set(fresh)
    scale = min(max(belief_scale, 0.0), 1.0)
    mapped: Dict[str, str] = {}
    nodes: Dict[str, Node] = {}
    for n in template.nodes:
        if n.id in binding:
            nid = binding[n.id]
        elif n.id in fresh:
            nid = names.for_node(n.kind, n.lex)
        else:
            raise StructuralError(f"template node {n.id} is neither bound nor fresh")
        mapped[n.id] = nid
        if nid not in nodes:
            b = min(max(n.belief * scale, 0.0), 1.0)
            nodes[nid] = Node(nid, n.kind, n.lex, b, n.negated)
    links = [RoleLink(mapped[l.src], l.role, mapped[l.dst]) for l in template.links]
    return Graphlet(nodes.values(), links)


def _display(n: Node) -> str:
    if n.kind is NodeKind.PREDICATE and n.lex:
        return n.lex
    return n.id


def render(g: Graphlet) -> str:
    """Arrow notation, one chain per line: `obj-1 <-hq- orange <-ako- color`.

    Chains start at root nodes (no incoming links) and follow outgoing
    links depth-first; each root-to-terminal path becomes one line read
    target-first. Isolated nodes render as bare names.
    """
    lines: List[str] = []
    covered: Set[Tuple[str, str, str]] = set()

    def walk(nid: str, suffix: List[str], seen: Set[str]):
        outs = [l for l in g.out_links(nid)]
        if not outs:
            lines.append(" ".join([_display(g.node(nid))] + suffix))
            return
        for l in outs:
            covered.add((l.src, l.role, l.dst))
            piece = [f"<-{l.role}-", _display(g.node(nid))] + suffix
            if l.dst in seen:  # cycle guard
                lines.append(" ".join([g.node(l.dst).id] + piece))
            else:
                walk(l.dst, piece, seen | {l.dst})

    for n in g.nodes:
        if not g.in_links(n.id):
            if g.out_links(n.id):
                walk(n.id, [], {n.id})
            else:
                lines.append(_display(n))
    for l in g.links:  # anything unreachable from a root (pure cycles)
        if (l.src, l.role, l.dst) not in covered:
            lines.append(f"{_display(g.node(l.dst))} <-{l.role}- {_display(g.node(l.src))}")
    return "\n".join(lines)


def summary(g: Graphlet) -> str:
    """Single-line render, chains joined by ' & '."""
    return " & ".join(render(g).splitlines())


def parse_arrow(text: str, names: Optional[NameGen] = None) -> Graphlet:
    """Parse canonical arrow notation back into a graphlet.

    Each line is a chain `term <-role- lex <-role- lex ...`; the leftmost
    token names an object node (its literal id), later tokens create
    predicate nodes with that lex. Lines sharing a leftmost id share that
    object node.
    """
    names = names or NameGen()
    b = Builder(names)
    seen_objs: Dict[str, str] = {}
    arrow = re.compile(r"<-([a-z]+)-")
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if head not in seen_objs:
            seen_objs[head] = b.obj(id=head)
        target = seen_objs[head]
        i = 1
        while i < len(parts):
            m = arrow.fullmatch(parts[i])
            if not m or i + 1 >= len(parts):
                raise StructuralError(f"bad chain syntax: {line!r}")
            role, lex = m.group(1), parts[i + 1]
            target = b.fact(lex, role, target)
            i += 2
    return b.build()


def dump(g: Graphlet) -> str:
    """Structured dump: one node per line `id kind lex belief negated`,
    one link per line `from -role-> to`. Lex is shell-quoted; `-` = none."""
    out = []
    for n in g.nodes:
        lex = shlex.quote(n.lex) if n.lex else "-"
        out.append(f"{n.id} {n.kind.value} {lex} {n.belief!r} {str(n.negated).lower()}")
    for l in g.links:
        out.append(f"{l.src} -{l.role}-> {l.dst}")
    return "\n".join(out)


_LINK_RE = re.compile(r"^(\S+) -([a-z]+)-> (\S+)$")


def load_dump(text: str) -> Graphlet:
    nodes: List[Node] = []
    links: List[RoleLink] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINK_RE.match(line)
        if m:
            links.append(RoleLink(m.group(1), m.group(2), m.group(3)))
            continue
        parts = shlex.split(line)
        if len(parts) != 5:
            raise StructuralError(f"bad dump line: {line!r}")
        nid, kind, lex, belief, negated = parts
        nodes.append(Node(nid, NodeKind(kind), None if lex == "-" else lex,
                          float(belief), negated == "true"))
    return Graphlet(nodes, links)


def _strict_binding_ok(a: Graphlet, b: Graphlet, binding: Binding,
                       grounded: Set[str]) -> bool:
    if len(set(binding.values())) != len(binding):
        return False
    for pid, sid in binding.items():
        if a.node(pid).lex != b.node(sid).lex:
            return False
        # a fresh object node may not alias a known object
        if (pid != sid and sid in grounded
                and a.node(pid).kind is NodeKind.OBJECT):
            return False
    return True


def structurally_equal(a: Graphlet, b: Graphlet, *, grounded: Iterable[str] = ()) -> bool:
    """Isomorphism on (kind, lex, negation, links), ignoring beliefs.

    Grounded node ids (typically: working-memory ids) are identity-pinned:
    a grounded pattern node maps only to itself, and no object node maps
    onto a different grounded object. Predicate nodes may still alias, so
    a re-posted fact instance about the same object compares equal.
    """
    if len(a) != len(b) or len(a.links) != len(b.links):
        return False
    gset = set(grounded)
    for binding in match(a, b, min_belief=0.0, grounded=gset):
        if _strict_binding_ok(a, b, binding, gset):
            return True
    return False


def contains(store: StoreLike, fragment: Graphlet, *, min_belief: float = 0.0,
             grounded: Optional[Set[str]] = None) -> bool:
    """True when the fragment matches somewhere in the store."""
    for _ in match(fragment, store, min_belief, grounded=grounded):
        return True
    return False


def canonical_signature(g: Graphlet) -> str:
    """Structure-only fingerprint, stable under node renaming.

    Iteratively refines node labels from (kind, lex, negation) with the
    multiset of role-labelled neighbor labels, then serializes in sorted
    order. Used to group operators by structurally-equal triggers.
    """
    labels = {n.id: f"{n.kind.value}|{n.lex or ''}|{int(n.negated)}" for n in g.nodes}
    for _ in range(3):
        nxt = {}
        for n in g.nodes:
            outs = sorted(f"{l.role}>{labels[l.dst]}" for l in g.out_links(n.id))
            ins = sorted(f"{l.role}<{labels[l.src]}" for l in g.in_links(n.id))
            nxt[n.id] = labels[n.id] + "(" + ",".join(outs) + ";" + ",".join(ins) + ")"
        labels = nxt
    return "&".join(sorted(labels.values()))
