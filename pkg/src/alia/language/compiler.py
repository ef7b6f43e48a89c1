"""Compilation from association lists into rules, operators, and
immediate focal items."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from ..grounding.vision import CANONICAL_COLORS
from ..inference import Rule
from ..kinds import DirectiveKind
from ..memory import FocusKind
from ..policy import DirectiveTemplate, Operator, Trigger
from ..semnet import Builder, Graphlet, NameGen
from .digest import ABracket, AList


class CompileError(ValueError):
    """A digest cannot be turned into an artifact; names the slot."""


HEDGE_VALUES = {
    "always": 1.0, "must": 1.0,
    "usually": 0.8, "probably": 0.8, "often": 0.8, "you could": 0.8,
    "sometimes": 0.5, "might": 0.5,
}

_COLOR_TERMS = frozenset(CANONICAL_COLORS)


def singularize(noun: str) -> str:
    if noun.endswith("ies"):
        return noun[:-3] + "y"
    if noun.endswith("es") and noun[:-2].endswith(("x", "s", "z", "ch", "sh")):
        return noun[:-2]
    if noun.endswith("s") and not noun.endswith("ss"):
        return noun[:-1]
    return noun


@dataclass
class FocusSpec:
    payload: Graphlet
    tag: DirectiveKind
    kind: FocusKind


@dataclass
class Compiled:
    category: str
    sentence: str
    rule: Optional[Rule] = None
    operator: Optional[Operator] = None
    focus: Optional[FocusSpec] = None

    @property
    def what(self) -> str:
        if self.rule is not None:
            return "rule"
        if self.operator is not None:
            return "operator"
        return {DirectiveKind.DO: "command", DirectiveKind.CHK: "question",
                DirectiveKind.FIND: "question",
                DirectiveKind.NOTE: "fact"}.get(self.focus.tag, "focus")


def _hedge(alist: AList, default: float) -> float:
    h = alist.first("HEDGE")
    if h is None:
        return default
    return HEDGE_VALUES.get(h, default)


def compile_alist(alist: AList, names: NameGen,
                  it_node: Optional[str] = None) -> Compiled:
    """Turn a digested utterance into its internal artifact."""
    cat = alist.category
    if cat == "rule-teaching":
        return _compile_rule(alist, names)
    if cat == "operator-teaching":
        return _compile_operator(alist, names)
    if cat == "command":
        return _compile_command(alist, names, it_node)
    if cat == "yn-question":
        return _compile_ynq(alist, names, it_node)
    if cat == "wh-question":
        return _compile_whq(alist, names, it_node)
    if cat == "fact":
        return _compile_fact(alist, names, it_node)
    raise CompileError(f"unmappable category {cat!r}")


# ---------------------------------------------------------------- rules

def _compile_rule(alist: AList, names: NameGen) -> Compiled:
    cond = Builder(names)
    x = cond.obj()
    for quality in alist.values("RULE-COND-HQ"):
        cond.fact(quality, "hq", x)
    for noun in alist.values("RULE-COND-AKO"):
        cond.fact(singularize(noun), "ako", x)
    condition = cond.build()
    if len(condition) < 2:
        raise CompileError("rule with no condition slots")

    concl = Builder(names)
    concl.obj(id=x)
    res_ako = alist.first("RULE-RES-AKO")
    res_hq = alist.first("RULE-RES-HQ")
    if res_ako is not None:
        concl.fact(singularize(res_ako), "ako", x)
    elif res_hq is not None:
        concl.fact(res_hq, "hq", x)
    else:
        raise CompileError("rule without a result slot (RULE-RES-AKO/RULE-RES-HQ)")
    rule = Rule("", condition, concl.build(), _hedge(alist, 1.0),
                provenance=alist.sentence)
    return Compiled("rule-teaching", alist.sentence, rule=rule)


# ---------------------------------------------------------------- operators

def _act_step(b: Builder, verb: str, arg: Optional[str],
              it_id: Optional[str]) -> None:
    """Append a verb predicate with its single argument link. `it_id` is
    the node 'it' resolves to (trigger subject or the focused object)."""
    act = b.pred(verb)
    if verb == "say":
        b.link(act, "arg", b.obj(arg or ""))
    elif verb in ("move", "drive", "turn"):
        b.link(act, "dir", b.obj(arg or "forward"))
    elif verb in ("grab", "release", "raise", "lower"):
        if arg in (None, "it"):
            if it_id is None:
                raise CompileError("'it' has no referent: no object is in focus")
            b.link(act, "obj", it_id)
        else:
            noun = singularize(arg.split()[-1])
            b.link(act, "obj", b.obj(noun))
    else:
        b.link(act, "agt", b.obj())


def _quality_pattern(names: NameGen, lex: str, x: str) -> Graphlet:
    b = Builder(names)
    b.obj(id=x)
    q = b.fact(lex, "hq", x)
    if lex in _COLOR_TERMS:
        b.fact("color", "ako", q)
    return b.build()


def _body_step(names: NameGen, bracket: ABracket, x: str) -> DirectiveTemplate:
    if bracket.slot == "DOSTEP":
        verb = bracket.find("OP-BODY-ACT")
        arg = bracket.find("OP-BODY-ARG")
        if verb is None:
            raise CompileError("body step without OP-BODY-ACT")
        b = Builder(names)
        transitive_it = (verb.value in ("grab", "release", "raise", "lower")
                         and (arg is None or arg.value == "it"))
        if transitive_it:
            b.obj(id=x)   # 'it' inside a body is the trigger subject
        _act_step(b, verb.value, arg.value if arg else None,
                  x if transitive_it else None)
        return DirectiveTemplate(DirectiveKind.DO, b.build())
    if bracket.slot == "CHKSTEP":
        pred = bracket.find("Q-PRED")
        if pred is None:
            raise CompileError("check step without Q-PRED")
        return DirectiveTemplate(DirectiveKind.CHK,
                                 _quality_pattern(names, pred.value, x))
    if bracket.slot == "FINDWHAT":
        b = Builder(names)
        b.obj(id=x)
        b.fact(None, "ako", x)
        return DirectiveTemplate(DirectiveKind.FIND, b.build())
    if bracket.slot == "FINDCOLOR":
        b = Builder(names)
        b.obj(id=x)
        c = b.fact(None, "hq", x)
        b.fact("color", "ako", c)
        return DirectiveTemplate(DirectiveKind.FIND, b.build())
    raise CompileError(f"unmappable body step {bracket.slot!r}")


def _compile_operator(alist: AList, names: NameGen) -> Compiled:
    trig_bracket = alist.top("OP-TRIG")
    if trig_bracket is None:
        raise CompileError("operator sentence without OP-TRIG")
    x = names.fresh("x")
    enablement: Optional[Graphlet] = None

    verb = trig_bracket.find("CMD-VERB")
    qclass = trig_bracket.find("Q-CLASS")
    qpred = trig_bracket.find("Q-PRED")
    if verb is not None:
        tb = Builder(names)
        act = tb.pred(verb.value)
        tb.obj(id=x)
        tb.link(act, "agt", x)
        trigger = Trigger(DirectiveKind.DO, tb.build())
    elif trig_bracket.find("FINDKIND") is not None:
        tb = Builder(names)
        tb.obj(id=x)
        tb.fact(None, "ako", x)
        trigger = Trigger(DirectiveKind.FIND, tb.build())
    elif qclass is not None:
        # the class assertion is the trigger; the predicate clause gates it
        tb = Builder(names)
        tb.obj(id=x)
        tb.fact(singularize(qclass.value), "ako", x)
        trigger = Trigger(DirectiveKind.NOTE, tb.build())
        if qpred is not None:
            eb = Builder(names)
            eb.obj(id=x)
            eb.fact(qpred.value, "hq", x)
            enablement = eb.build()
    elif qpred is not None:
        trigger = Trigger(DirectiveKind.NOTE,
                          _quality_pattern(names, qpred.value, x))
    else:
        raise CompileError("trigger clause has no usable slot")

    steps: List[DirectiveTemplate] = []
    for bracket in alist.brackets:
        if bracket.slot in ("DOSTEP", "CHKSTEP", "FINDWHAT", "FINDCOLOR"):
            steps.append(_body_step(names, bracket, x))
    if not steps:
        raise CompileError("operator sentence without body steps")

    bound = set(trigger.pattern.node_ids())
    if enablement is not None:
        bound |= set(enablement.node_ids())
    fresh = frozenset(nid for s in steps for nid in s.pattern.node_ids()
                      if nid not in bound)
    op = Operator("", trigger, enablement, tuple(steps),
                  preference=_hedge(alist, 1.0), provenance=alist.sentence,
                  fresh=fresh)
    return Compiled("operator-teaching", alist.sentence, operator=op)


# ---------------------------------------------------------------- foci

def _resolve_it(it_node: Optional[str]) -> str:
    if it_node is None:
        raise CompileError("'it' has no referent: no object is in focus")
    return it_node


def _compile_command(alist: AList, names: NameGen,
                     it_node: Optional[str]) -> Compiled:
    step = alist.top("CMDSTEP")
    if step is None:
        raise CompileError("command without CMDSTEP")
    verb = step.find("CMD-VERB")
    arg = step.find("CMD-OBJ")
    if verb is None:
        raise CompileError("command without CMD-VERB")
    b = Builder(names)
    transitive_it = (verb.value in ("grab", "release", "raise", "lower")
                     and (arg is None or arg.value == "it"))
    if transitive_it:
        b.obj(id=_resolve_it(it_node))
    _act_step(b, verb.value, arg.value if arg else None,
              it_node if transitive_it else None)
    return Compiled("command", alist.sentence,
                    focus=FocusSpec(b.build(), DirectiveKind.DO,
                                    FocusKind.COMMAND))


def _compile_ynq(alist: AList, names: NameGen,
                 it_node: Optional[str]) -> Compiled:
    x = _resolve_it(it_node)
    pred = alist.first("Q-PRED")
    qclass = alist.first("Q-CLASS")
    if pred is not None:
        payload = _quality_pattern(names, pred, x)
    elif qclass is not None:
        b = Builder(names)
        b.obj(id=x)
        b.fact(singularize(qclass), "ako", x)
        payload = b.build()
    else:
        raise CompileError("question without Q-PRED or Q-CLASS")
    return Compiled("yn-question", alist.sentence,
                    focus=FocusSpec(payload, DirectiveKind.CHK,
                                    FocusKind.COMMAND))


def _compile_whq(alist: AList, names: NameGen,
                 it_node: Optional[str]) -> Compiled:
    x = _resolve_it(it_node)
    b = Builder(names)
    b.obj(id=x)
    if alist.top("WHQCOLOR") is not None:
        c = b.fact(None, "hq", x)
        b.fact("color", "ako", c)
    else:
        b.fact(None, "ako", x)
    return Compiled("wh-question", alist.sentence,
                    focus=FocusSpec(b.build(), DirectiveKind.FIND,
                                    FocusKind.COMMAND))


def _compile_fact(alist: AList, names: NameGen,
                  it_node: Optional[str]) -> Compiled:
    x = _resolve_it(it_node)
    pred = alist.first("Q-PRED")
    qclass = alist.first("Q-CLASS")
    if pred is not None:
        payload = _quality_pattern(names, pred, x)
    elif qclass is not None:
        b = Builder(names)
        b.obj(id=x)
        b.fact(singularize(qclass), "ako", x)
        payload = b.build()
    else:
        raise CompileError("fact without Q-PRED or Q-CLASS")
    return Compiled("fact", alist.sentence,
                    focus=FocusSpec(payload, DirectiveKind.NOTE,
                                    FocusKind.ASSERTION))
