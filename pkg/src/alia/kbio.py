"""Knowledge-base files: rules and operators share one text container of
serialized graphlets. Node ids are renamed through the engine's name
source on load, so stored patterns can never collide with live names."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .inference import Rule
from .kinds import DirectiveKind
from .policy import DirectiveTemplate, Operator, Trigger
from .semnet import Graphlet, NameGen, Node, RoleLink, dump, load_dump


class KnowledgeError(ValueError):
    """A knowledge file could not be interpreted."""


def _rename(graphlets: List[Optional[Graphlet]],
            names: NameGen) -> List[Optional[Graphlet]]:
    """Consistently rename every node id across an artifact's graphlets,
    preserving the shared-variable structure."""
    mapping: Dict[str, str] = {}
    out: List[Optional[Graphlet]] = []
    for g in graphlets:
        if g is None:
            out.append(None)
            continue
        nodes = []
        for n in g.nodes:
            if n.id not in mapping:
                mapping[n.id] = names.for_node(n.kind, n.lex)
            nodes.append(Node(mapping[n.id], n.kind, n.lex, n.belief, n.negated))
        links = [RoleLink(mapping[l.src], l.role, mapping[l.dst])
                 for l in g.links]
        out.append(Graphlet(nodes, links))
    return out


def save_knowledge(path, rules: List[Rule], operators: List[Operator]) -> None:
    lines: List[str] = ["# knowledge database"]
    for r in rules:
        lines.append(f"rule belief={r.belief!r}")
        lines.append(f"provenance: {r.provenance}")
        lines.append("condition:")
        lines.extend("  " + l for l in dump(r.condition).splitlines())
        lines.append("conclusion:")
        lines.extend("  " + l for l in dump(r.conclusion).splitlines())
        lines.append("end")
    for o in operators:
        lines.append(f"operator pref={o.preference!r} trigger={o.trigger.kind.value}")
        lines.append(f"provenance: {o.provenance}")
        lines.append("trigger:")
        lines.extend("  " + l for l in dump(o.trigger.pattern).splitlines())
        if o.enablement is not None:
            lines.append("enablement:")
            lines.extend("  " + l for l in dump(o.enablement).splitlines())
        for t in o.body:
            head = f"body {t.kind.value}"
            if t.fcn:
                head += f" fcn={t.fcn}"
            lines.append(head + ":")
            lines.extend("  " + l for l in dump(t.pattern).splitlines())
        lines.append("end")
    Path(path).write_text("\n".join(lines) + "\n")


def load_knowledge(path, names: NameGen) -> Tuple[List[Rule], List[Operator]]:
    rules: List[Rule] = []
    operators: List[Operator] = []
    lines = Path(path).read_text().splitlines()
    i = 0

    def read_section(start: int) -> Tuple[str, int]:
        body = []
        j = start
        while j < len(lines) and lines[j].startswith("  "):
            body.append(lines[j].strip())
            j += 1
        return "\n".join(body), j

    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "rule":
            attrs = dict(p.split("=", 1) for p in parts[1:])
            provenance = ""
            sections: Dict[str, Graphlet] = {}
            while i < len(lines):
                header = lines[i].strip()
                i += 1
                if header == "end":
                    break
                if header.startswith("provenance:"):
                    provenance = header.split(":", 1)[1].strip()
                elif header in ("condition:", "conclusion:"):
                    text, i = read_section(i)
                    sections[header[:-1]] = load_dump(text)
                elif header:
                    raise KnowledgeError(f"unexpected rule line {header!r}")
            if "condition" not in sections or "conclusion" not in sections:
                raise KnowledgeError("rule block missing condition/conclusion")
            cond, concl = _rename([sections["condition"], sections["conclusion"]],
                                  names)
            rules.append(Rule("", cond, concl, float(attrs.get("belief", 1.0)),
                              provenance))
        elif parts[0] == "operator":
            attrs = dict(p.split("=", 1) for p in parts[1:])
            provenance = ""
            trigger_g: Optional[Graphlet] = None
            enablement: Optional[Graphlet] = None
            body: List[Tuple[DirectiveKind, Optional[str], Graphlet]] = []
            while i < len(lines):
                header = lines[i].strip()
                i += 1
                if header == "end":
                    break
                if header.startswith("provenance:"):
                    provenance = header.split(":", 1)[1].strip()
                elif header == "trigger:":
                    text, i = read_section(i)
                    trigger_g = load_dump(text)
                elif header == "enablement:":
                    text, i = read_section(i)
                    enablement = load_dump(text)
                elif header.startswith("body "):
                    spec = header[5:-1].split()
                    kind = DirectiveKind(spec[0])
                    fcn = None
                    for extra in spec[1:]:
                        if extra.startswith("fcn="):
                            fcn = extra[4:]
                    text, i = read_section(i)
                    body.append((kind, fcn, load_dump(text)))
                elif header:
                    raise KnowledgeError(f"unexpected operator line {header!r}")
            if trigger_g is None or not body:
                raise KnowledgeError("operator block missing trigger or body")
            renamed = _rename([trigger_g, enablement] + [g for _, _, g in body],
                              names)
            trigger_g, enablement = renamed[0], renamed[1]
            templates = tuple(DirectiveTemplate(kind, g, fcn)
                              for (kind, fcn, _), g in zip(body, renamed[2:]))
            bound = set(trigger_g.node_ids())
            if enablement is not None:
                bound |= set(enablement.node_ids())
            fresh = frozenset(nid for t in templates
                              for nid in t.pattern.node_ids()
                              if nid not in bound)
            operators.append(Operator(
                "", Trigger(DirectiveKind(attrs.get("trigger", "NOTE")), trigger_g),
                enablement, templates, float(attrs.get("pref", 1.0)),
                provenance, fresh))
        else:
            raise KnowledgeError(f"unexpected top-level line {line!r}")
    return rules, operators
