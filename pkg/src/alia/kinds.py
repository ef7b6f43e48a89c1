"""Directive tags shared across the engine."""

from __future__ import annotations

from enum import Enum


class DirectiveKind(Enum):
    NOTE = "NOTE"
    DO = "DO"
    ANTE = "ANTE"
    POST = "POST"
    CHK = "CHK"
    FIND = "FIND"
    ACH = "ACH"
    KEEP = "KEEP"
    PUNT = "PUNT"
    FCN = "FCN"


# Directive kinds an operator trigger may name.
TRIGGER_KINDS = frozenset({
    DirectiveKind.NOTE, DirectiveKind.DO, DirectiveKind.CHK,
    DirectiveKind.FIND, DirectiveKind.ACH,
})
