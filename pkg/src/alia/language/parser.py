"""Chart parsing over the instruction grammar.

An Earley recognizer decides membership and the longest viable prefix;
the single reported tree is the minimal derivation (fewest productions,
ties broken toward the leftmost derivation by production order)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .grammar import Grammar, Production, Sym


@dataclass(frozen=True)
class TreeNode:
    symbol: str
    start: int
    end: int
    prod: Optional[Production] = None      # None for token leaves
    children: Tuple["TreeNode", ...] = ()
    slot: Optional[str] = None             # use-site annotation

    @property
    def terminal(self) -> bool:
        return self.prod is None

    def span_text(self, tokens: List[str]) -> str:
        return " ".join(tokens[self.start:self.end])


@dataclass
class ParseResult:
    tokens: List[str]
    tree: Optional[TreeNode]
    prefix_len: int

    @property
    def ok(self) -> bool:
        return self.tree is not None

    @property
    def prefix(self) -> str:
        return " ".join(self.tokens[:self.prefix_len])


def _recognize(tokens: List[str], grammar: Grammar) -> int:
    """Earley recognition; returns the furthest chart position reached
    (== len(tokens) plus one when the sentence parses)."""
    n = len(tokens)
    charts: List[List[Tuple[int, int, int]]] = [[] for _ in range(n + 1)]
    in_chart: List[set] = [set() for _ in range(n + 1)]

    def add(pos: int, item) -> None:
        if item not in in_chart[pos]:
            in_chart[pos].add(item)
            charts[pos].append(item)

    for p in grammar.by_lhs[grammar.start]:
        add(0, (p.index, 0, 0))
    prods = grammar.productions
    for pos in range(n + 1):
        i = 0
        while i < len(charts[pos]):   # the chart grows while processed
            pidx, dot, origin = charts[pos][i]
            i += 1
            prod = prods[pidx]
            if dot < len(prod.rhs):
                sym = prod.rhs[dot]
                if sym.terminal:
                    if pos < n and tokens[pos] == sym.value:
                        add(pos + 1, (pidx, dot + 1, origin))
                else:   # predict (no epsilon rules exist)
                    for q in grammar.by_lhs.get(sym.value, ()):
                        add(pos, (q.index, 0, pos))
            else:       # complete into the origin chart's parents
                for opidx, odot, oorigin in list(charts[origin]):
                    oprod = prods[opidx]
                    if odot < len(oprod.rhs):
                        osym = oprod.rhs[odot]
                        if not osym.terminal and osym.value == prod.lhs:
                            add(pos, (opidx, odot + 1, oorigin))
    reached = 0
    for pos in range(n + 1):
        if charts[pos]:
            reached = pos
    for pidx, dot, origin in charts[n]:
        prod = prods[pidx]
        if prod.lhs == grammar.start and origin == 0 and dot == len(prod.rhs):
            return n + 1
    return reached


Cost = Tuple[int, Tuple[int, ...]]


def _best_tree(tokens: List[str], grammar: Grammar):
    """Minimal-derivation tree over the full span, or None."""
    n = len(tokens)
    memo: Dict[Tuple[str, int, int], Optional[Tuple[Cost, TreeNode]]] = {}
    visiting = set()

    def nt_best(nt: str, i: int, j: int):
        key = (nt, i, j)
        if key in memo:
            return memo[key]
        if key in visiting:
            return None  # cycle guard
        visiting.add(key)
        best = None
        for prod in grammar.by_lhs[nt]:
            fit = fit_rhs(prod.rhs, 0, i, j)
            if fit is None:
                continue
            (ccount, ctrace), children = fit
            cost = (1 + ccount, (prod.index,) + ctrace)
            if best is None or cost < best[0]:
                node = TreeNode(nt, i, j, prod, tuple(children))
                best = (cost, node)
        visiting.discard(key)
        memo[key] = best
        return best

    def fit_rhs(rhs: Tuple[Sym, ...], k: int, pos: int, j: int):
        """Best way to derive tokens[pos:j] from rhs[k:]."""
        if k == len(rhs):
            return ((0, ()), []) if pos == j else None
        sym = rhs[k]
        if sym.terminal:
            if pos < j and tokens[pos] == sym.value:
                rest = fit_rhs(rhs, k + 1, pos + 1, j)
                if rest is not None:
                    (rc, rt), rch = rest
                    leaf = TreeNode(sym.value, pos, pos + 1)
                    return ((rc, rt), [leaf] + rch)
            return None
        best = None
        # remaining symbols need at least one token each (no epsilon rules)
        min_tail = len(rhs) - k - 1
        for end in range(pos + 1, j - min_tail + 1):
            sub = nt_best(sym.value, pos, end)
            if sub is None:
                continue
            rest = fit_rhs(rhs, k + 1, end, j)
            if rest is None:
                continue
            (sc, strace), snode = sub
            (rc, rtrace), rch = rest
            cost = (sc + rc, strace + rtrace)
            if best is None or cost < best[0]:
                child = snode if sym.slot is None else TreeNode(
                    snode.symbol, snode.start, snode.end, snode.prod,
                    snode.children, sym.slot)
                best = (cost, [child] + rch)
        return best

    found = nt_best(grammar.start, 0, n)
    return found[1] if found else None


def parse(text_tokens: List[str], grammar: Grammar) -> ParseResult:
    """Parse a token list; out-of-grammar input is rejected (never
    approximated) with the longest matched prefix for feedback."""
    tokens = list(text_tokens)
    if not tokens:
        return ParseResult(tokens, None, 0)
    reached = _recognize(tokens, grammar)
    if reached <= len(tokens):
        return ParseResult(tokens, None, min(reached, len(tokens)))
    tree = _best_tree(tokens, grammar)
    if tree is None:  # recognized but unextractable; should not happen
        return ParseResult(tokens, None, len(tokens))
    return ParseResult(tokens, tree, len(tokens))
