"""Canonical payload shapes for actions and perceptual queries.

The language compiler and the grounding probes must agree on these
shapes, so both build them here.
"""

from __future__ import annotations

from typing import Optional

from ..semnet import Builder, Graphlet, NameGen

INTRANSITIVE_VERBS = frozenset({"flee", "stop", "beep"})
DIRECTIONAL_VERBS = frozenset({"move", "drive", "turn"})
TRANSITIVE_VERBS = frozenset({"grab", "release", "raise", "lower"})
SAY_VERB = "say"

MOTOR_VERBS = frozenset({"move", "drive", "turn", "grab", "release",
                         "raise", "lower", "stop", "beep", "say"})


def act_payload(names: NameGen, verb: str, *, direction: Optional[str] = None,
                text: Optional[str] = None, patient_id: Optional[str] = None,
                patient_lex: Optional[str] = None) -> Graphlet:
    """An action graphlet: a verb predicate with one argument link.

    Intransitive verbs take an `agt` link to an (anonymous) agent node so
    the predicate is fully constructed.
    """
    b = Builder(names)
    act = b.pred(verb)
    if direction is not None:
        b.link(act, "dir", b.obj(direction))
    elif text is not None:
        b.link(act, "arg", b.obj(text))
    elif patient_id is not None or patient_lex is not None:
        b.link(act, "obj", b.obj(patient_lex, id=patient_id))
    else:
        b.link(act, "agt", b.obj())
    return b.build()


def quality_query(names: NameGen, lex: str, target_id: Optional[str] = None,
                  negated: bool = False) -> Graphlet:
    """`<lex> -hq-> X`: does the target carry this quality?"""
    b = Builder(names)
    x = b.obj(id=target_id)
    b.fact(lex, "hq", x, negated=negated)
    return b.build()


def class_query(names: NameGen, lex: str,
                target_id: Optional[str] = None) -> Graphlet:
    """`<lex> -ako-> X`: is the target a member of this class?"""
    b = Builder(names)
    x = b.obj(id=target_id)
    b.fact(lex, "ako", x)
    return b.build()


def kind_query(names: NameGen, target_id: Optional[str] = None) -> Graphlet:
    """`? -ako-> X`: what is the target?"""
    b = Builder(names)
    x = b.obj(id=target_id)
    b.fact(None, "ako", x)
    return b.build()


def color_query(names: NameGen, target_id: Optional[str] = None) -> Graphlet:
    """`? -hq-> X, color -ako-> ?`: what color is the target?"""
    b = Builder(names)
    x = b.obj(id=target_id)
    c = b.fact(None, "hq", x)
    b.fact("color", "ako", c)
    return b.build()


def color_note(names: NameGen, target_id: str, color: str) -> Graphlet:
    """`X <-hq- <color> <-ako- color`: a color determination."""
    b = Builder(names)
    x = b.obj(id=target_id)
    c = b.fact(color, "hq", x)
    b.fact("color", "ako", c)
    return b.build()
