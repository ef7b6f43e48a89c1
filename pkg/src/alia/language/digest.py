"""Digestion: walk a parse tree, retain the marked nodes, and produce a
slot/value association list with constituent bracketing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .grammar import Grammar
from .parser import ParseResult, TreeNode

CATEGORY_BY_TOP = {
    "RULE_S": "rule-teaching",
    "OP_S": "operator-teaching",
    "CMD_S": "command",
    "YNQ_S": "yn-question",
    "WHQ_S": "wh-question",
    "FACT_S": "fact",
}


@dataclass
class ABracket:
    slot: str
    value: str
    children: List["ABracket"] = field(default_factory=list)

    def find(self, slot: str) -> Optional["ABracket"]:
        for c in self.children:
            if c.slot == slot:
                return c
        return None

    def find_all(self, slot: str) -> List["ABracket"]:
        return [c for c in self.children if c.slot == slot]


@dataclass
class AList:
    category: str
    entries: List[Tuple[str, str]]
    brackets: List[ABracket]
    sentence: str

    def values(self, slot: str) -> List[str]:
        return [v for s, v in self.entries if s == slot]

    def first(self, slot: str) -> Optional[str]:
        vals = self.values(slot)
        return vals[0] if vals else None

    def top(self, slot: str) -> Optional[ABracket]:
        for b in self.brackets:
            if b.slot == slot:
                return b
        return None

    def top_all(self, slot: str) -> List[ABracket]:
        return [b for b in self.brackets if b.slot == slot]


def digest(result: ParseResult, grammar: Grammar) -> AList:
    """Depth-first walk emitting (slot, value) for every marker-annotated
    node; bracketing mirrors the retained-node nesting."""
    assert result.tree is not None, "digest requires a successful parse"
    tokens = result.tokens
    entries: List[Tuple[str, str]] = []
    top: List[ABracket] = []

    def walk(node: TreeNode, sink: List[ABracket]) -> None:
        if node.terminal:
            return
        retained = node.slot is not None or node.symbol in grammar.retained
        if retained:
            label = node.slot or node.symbol
            value = node.span_text(tokens)
            entries.append((label, value))
            bracket = ABracket(label, value)
            sink.append(bracket)
            sink = bracket.children
        for child in node.children:
            walk(child, sink)

    root = result.tree
    category = "unknown"
    if root.children and not root.children[0].terminal:
        category = CATEGORY_BY_TOP.get(root.children[0].symbol, "unknown")
    walk(root, top)
    return AList(category, entries, top, " ".join(tokens))
