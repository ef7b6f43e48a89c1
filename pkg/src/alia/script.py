"""Sessions and the scripted scenario runner.

A script interleaves `say:` (queue an utterance), `wait: <n>` (run n
cycles), `assert: <regex>` and `refute: <regex>` checks over the trace
emitted so far. Runs are deterministic under a fixed seed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from .config import EngineConfig
from .engine import Engine
from .grounding.world import World, load_scenario_file
from .kbio import load_knowledge
from .language import Grammar, Language


class ScriptError(ValueError):
    """Malformed script line; carries the line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class Session:
    engine: Engine
    mode: str = "script"   # repl | script | serve

    @classmethod
    def build(cls, *, grammar_path: Optional[str] = None,
              scenario_path: Optional[str] = None,
              rules_path: Optional[str] = None,
              ops_path: Optional[str] = None,
              seed: int = 0, mode: str = "script",
              config: Optional[EngineConfig] = None) -> "Session":
        cfg = config or EngineConfig()
        grammar = None
        if grammar_path:
            grammar = Grammar.from_text(Path(grammar_path).read_text())
        world: Optional[World] = None
        if scenario_path:
            world = load_scenario_file(Path(scenario_path), cfg)
        engine = Engine(language=Language(grammar), world=world, config=cfg,
                        seed=seed)
        for path in (rules_path, ops_path):
            if path:
                rules, ops = load_knowledge(path, engine.names)
                for r in rules:
                    engine.rules.add(r)
                for o in ops:
                    engine.ops.add(o)
        return cls(engine, mode)

    def to_script(self) -> str:
        """Render the user side of the transcript as a replayable script:
        same utterances landing on the same cycles."""
        groups: Dict[int, List[str]] = {}
        for e in self.engine.transcript:
            if e.speaker == "user":
                groups.setdefault(e.cycle, []).append(e.text)
        lines: List[str] = ["# transcript replay"]
        cur = 0
        for cycle in sorted(groups):
            pre = (cycle - 1) - cur
            if pre > 0:
                lines.append(f"wait: {pre}")
                cur += pre
            for text in groups[cycle]:
                lines.append(f"say: {text}")
        tail = self.engine.cycle - cur
        if tail > 0:
            lines.append(f"wait: {tail}")
        return "\n".join(lines) + "\n"


@dataclass
class ScriptReport:
    ok: bool
    failures: List[str] = field(default_factory=list)
    cycles: int = 0

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1


def run_script(session: Session, text: str) -> ScriptReport:
    engine = session.engine
    failures: List[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ScriptError(lineno, f"missing ':' in {line!r}")
        head, arg = line.split(":", 1)
        head, arg = head.strip(), arg.strip()
        if head == "say":
            if not arg:
                raise ScriptError(lineno, "say without text")
            engine.instruct(arg)
        elif head == "wait":
            try:
                n = int(arg)
            except ValueError:
                raise ScriptError(lineno, f"bad wait count {arg!r}") from None
            if n < 0:
                raise ScriptError(lineno, "negative wait")
            engine.run(n)
        elif head == "assert":
            try:
                pattern = re.compile(arg)
            except re.error as exc:
                raise ScriptError(lineno, f"bad pattern: {exc}") from None
            if not any(pattern.search(l) for l in engine.trace.lines()):
                failures.append(f"line {lineno}: no trace line matches {arg!r}")
        elif head == "refute":
            try:
                pattern = re.compile(arg)
            except re.error as exc:
                raise ScriptError(lineno, f"bad pattern: {exc}") from None
            hits = [l for l in engine.trace.lines() if pattern.search(l)]
            if hits:
                failures.append(f"line {lineno}: {arg!r} matched: {hits[0]}")
        else:
            raise ScriptError(lineno, f"unknown directive {head!r}")
    return ScriptReport(not failures, failures, engine.cycle)


def run_script_file(session: Session, path) -> ScriptReport:
    return run_script(session, Path(path).read_text())
