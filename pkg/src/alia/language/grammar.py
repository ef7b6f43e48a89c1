"""Context-free grammar for typed instructions.

File format, one rule per line (repeated left-hand sides accumulate):

    NT -> sym sym | sym ...     # terminals are lowercase words
    *NT -> ...                  # retained: NT survives into the a-list
    OTHER -> NT:slot-label sym  # use-site slot annotation (also retains)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Optional, Set, Tuple


class GrammarError(ValueError):
    """The grammar text is malformed or not well-formed as a CFG."""


@dataclass(frozen=True)
class Sym:
    terminal: bool
    value: str
    slot: Optional[str] = None


@dataclass(frozen=True)
class Production:
    lhs: str
    rhs: Tuple[Sym, ...]
    index: int


_NT_RE = re.compile(r"^[A-Z][A-Z0-9_]*$")
_TERM_RE = re.compile(r"^[a-z][a-z']*$")
_ANNOT_RE = re.compile(r"^([A-Z][A-Z0-9_]*):([A-Za-z0-9-]+)$")


class Grammar:
    def __init__(self, start: str, productions: List[Production],
                 retained: Set[str]):
        self.start = start
        self.productions = productions
        self.retained = retained
        self.by_lhs: Dict[str, List[Production]] = {}
        for p in productions:
            self.by_lhs.setdefault(p.lhs, []).append(p)
        self.vocabulary: Set[str] = {s.value for p in productions
                                     for s in p.rhs if s.terminal}
        self._validate()

    def _validate(self) -> None:
        if self.start not in self.by_lhs:
            raise GrammarError(f"start symbol {self.start} has no productions")
        for p in self.productions:
            for s in p.rhs:
                if not s.terminal and s.value not in self.by_lhs:
                    raise GrammarError(
                        f"nonterminal {s.value} used in {p.lhs} but never defined")
        # every nonterminal must be productive ...
        productive: Set[str] = set()
        changed = True
        while changed:
            changed = False
            for p in self.productions:
                if p.lhs in productive:
                    continue
                if all(s.terminal or s.value in productive for s in p.rhs):
                    productive.add(p.lhs)
                    changed = True
        dead = set(self.by_lhs) - productive
        if dead:
            raise GrammarError(f"unproductive nonterminals: {sorted(dead)}")
        # ... and reachable from the start symbol
        reachable = {self.start}
        frontier = [self.start]
        while frontier:
            nt = frontier.pop()
            for p in self.by_lhs.get(nt, ()):
                for s in p.rhs:
                    if not s.terminal and s.value not in reachable:
                        reachable.add(s.value)
                        frontier.append(s.value)
        unreachable = set(self.by_lhs) - reachable
        if unreachable:
            raise GrammarError(f"unreachable nonterminals: {sorted(unreachable)}")

    @classmethod
    def from_text(cls, text: str, start: str = "S") -> "Grammar":
        productions: List[Production] = []
        retained: Set[str] = set()
        index = 0
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "->" not in line:
                raise GrammarError(f"line {lineno}: missing '->'")
            lhs_txt, rhs_txt = line.split("->", 1)
            lhs_txt = lhs_txt.strip()
            if lhs_txt.startswith("*"):
                lhs_txt = lhs_txt[1:].strip()
                retained.add(lhs_txt)
            if not _NT_RE.match(lhs_txt):
                raise GrammarError(f"line {lineno}: bad nonterminal {lhs_txt!r}")
            for alt in rhs_txt.split("|"):
                syms: List[Sym] = []
                for tok in alt.split():
                    m = _ANNOT_RE.match(tok)
                    if m and _NT_RE.match(m.group(1)):
                        syms.append(Sym(False, m.group(1), m.group(2)))
                    elif _NT_RE.match(tok):
                        syms.append(Sym(False, tok))
                    elif _TERM_RE.match(tok):
                        syms.append(Sym(True, tok))
                    else:
                        raise GrammarError(f"line {lineno}: bad symbol {tok!r}")
                if not syms:
                    raise GrammarError(f"line {lineno}: empty alternative")
                productions.append(Production(lhs_txt, tuple(syms), index))
                index += 1
        return cls(start, productions, retained)


def default_grammar() -> Grammar:
    text = resources.files("alia.language").joinpath("core.gram").read_text()
    return Grammar.from_text(text)


def tokenize(text: str) -> List[str]:
    """Lowercase word tokens; punctuation (including parenthesized hedges)
    is stripped."""
    return re.findall(r"[a-z']+", text.lower())
