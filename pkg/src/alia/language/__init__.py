"""Instruction pipeline: CFG parse, a-list digestion, artifact compilation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from ..semnet import NameGen
from .compiler import Compiled, CompileError, FocusSpec, compile_alist
from .digest import ABracket, AList, digest
from .grammar import Grammar, GrammarError, default_grammar, tokenize
from .parser import ParseResult, TreeNode, parse


@dataclass
class Rejection:
    """Out-of-grammar or uncompilable input, with user feedback."""
    text: str
    prefix: str
    reason: str


class Language:
    def __init__(self, grammar: Optional[Grammar] = None):
        self.grammar = grammar or default_grammar()

    def parse(self, text: str) -> ParseResult:
        return parse(tokenize(text), self.grammar)

    def digest(self, result: ParseResult) -> AList:
        return digest(result, self.grammar)

    def understand(self, text: str, names: NameGen,
                   it_node: Optional[str] = None) -> Union[Compiled, Rejection]:
        result = self.parse(text)
        if not result.ok:
            return Rejection(text, result.prefix,
                             f"cannot parse past {result.prefix!r}")
        try:
            return compile_alist(self.digest(result), names, it_node)
        except CompileError as exc:
            return Rejection(text, " ".join(result.tokens), str(exc))


__all__ = [
    "ABracket", "AList", "Compiled", "CompileError", "FocusSpec", "Grammar",
    "GrammarError", "Language", "ParseResult", "Rejection", "TreeNode",
    "compile_alist", "default_grammar", "digest", "parse", "tokenize",
]
