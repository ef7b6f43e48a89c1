"""Engine trace: strictly ordered events, the substrate of golden tests."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

CATEGORIES = ("attention", "halo", "directive", "grounding", "speech")


@dataclass(frozen=True)
class TraceEvent:
    cycle: int
    seq: int
    category: str
    detail: str

    def line(self) -> str:
        return f"{self.cycle:05d} {self.seq:04d} {self.category:<9} {self.detail}"


class Trace:
    def __init__(self):
        self.events: List[TraceEvent] = []
        self._cycle = 0
        self._seq = 0

    def set_cycle(self, cycle: int) -> None:
        self._cycle = cycle

    def emit(self, category: str, detail: str) -> TraceEvent:
        assert category in CATEGORIES, category
        self._seq += 1
        ev = TraceEvent(self._cycle, self._seq, category, detail)
        self.events.append(ev)
        return ev

    def lines(self) -> List[str]:
        return [e.line() for e in self.events]

    def text(self) -> str:
        return "\n".join(self.lines()) + ("\n" if self.events else "")
