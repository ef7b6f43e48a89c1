from __future__ import annotations

import random
from collections import Counter

import pytest

from alia.kinds import DirectiveKind
from alia.policy import (
    Candidate, DirectiveTemplate, Operator, OperatorBase, OperatorError, Trigger,
)
from alia.semnet import Builder, Graphlet, NameGen


def find_kind_trigger(names):
    b = Builder(names)
    x = b.obj()
    k = b.fact(None, "ako", x)
    return Trigger(DirectiveKind.FIND, b.build()), x, k


def make_find_operator(names, body_lex, pref=1.0, oid=""):
    """Operator triggered by FIND[? ako X] whose body checks body_lex."""
    trig, x, _ = find_kind_trigger(names)
    bb = Builder(names)
    bb.obj(id=x)
    bb.fact(body_lex, "hq", x)
    body = (DirectiveTemplate(DirectiveKind.CHK, bb.build()),)
    fresh = frozenset(n for n in body[0].pattern.node_ids()
                      if n not in trig.pattern.node_ids())
    return Operator(oid, trig, None, body, pref, fresh=fresh)


def note_close_trigger(names):
    b = Builder(names)
    x = b.obj()
    b.fact("close", "hq", x)
    return Trigger(DirectiveKind.NOTE, b.build()), x


def find_kind_payload(names, obj_id):
    b = Builder(names)
    x = b.obj(id=obj_id)
    b.fact(None, "ako", x)
    return b.build()


def wm_with_close(names):
    b = Builder(names)
    x = b.obj(id="obj-1")
    b.fact("close", "hq", x)
    return b.build()


def test_applicable_returns_both_find_operators():
    names = NameGen()
    ops = OperatorBase(names)
    ops.add(make_find_operator(names, "striped"))
    ops.add(make_find_operator(names, "orange"))
    payload = find_kind_payload(names, "obj-1")
    got = ops.applicable(DirectiveKind.FIND, payload, wm_with_close(names))
    assert len(got) == 2


def test_trigger_kind_gates():
    names = NameGen()
    ops = OperatorBase(names)
    ops.add(make_find_operator(names, "striped"))
    payload = find_kind_payload(names, "obj-1")
    assert ops.applicable(DirectiveKind.CHK, payload, wm_with_close(names)) == []


def test_no_operators_loaded_empty():
    names = NameGen()
    ops = OperatorBase(names)
    assert ops.applicable(DirectiveKind.FIND, find_kind_payload(names, "obj-1"),
                          Graphlet()) == []


def test_enablement_consults_working_and_halo():
    names = NameGen()
    ops = OperatorBase(names)
    trig = Builder(names)
    x = trig.obj()
    trig.fact("zebra", "ako", x)
    en = Builder(names)
    en.obj(id=x)
    en.fact("close", "hq", x)
    body = Builder(names)
    body.obj(id=x)
    stop = body.fact("stop", "agt", x)
    op = Operator("", Trigger(DirectiveKind.NOTE, trig.build()), en.build(),
                  (DirectiveTemplate(DirectiveKind.DO, body.build()),), 1.0,
                  fresh=frozenset({stop}))
    ops.add(op)

    pay = Builder(names)
    pay.obj(id="obj-1")
    pay.fact("zebra", "ako", "obj-1")
    payload = pay.build()

    # no close fact: not applicable
    assert ops.applicable(DirectiveKind.NOTE, payload, Graphlet()) == []
    # close fact in working memory: applicable, binding combined
    got = ops.applicable(DirectiveKind.NOTE, payload, wm_with_close(names))
    assert len(got) == 1
    assert got[0].binding_map()[x] == "obj-1"
    # close fact only in the halo: also applicable
    got2 = ops.applicable(DirectiveKind.NOTE, payload, Graphlet(),
                          halo=wm_with_close(names))
    assert len(got2) == 1


def test_order_single_candidate_always_first():
    c = Candidate("op-1", (), 0.4)
    for seed in range(20):
        assert OperatorBase.order([c], seed) == [c]


def test_order_equal_preferences_split_evenly():
    a = Candidate("a", (), 1.0)
    b = Candidate("b", (), 1.0)
    first = Counter(OperatorBase.order([a, b], seed)[0].op_id
                    for seed in range(10_000))
    assert abs(first["a"] / 10_000 - 0.5) < 0.02


def test_order_weighted_90_10():
    a = Candidate("a", (), 0.9)
    b = Candidate("b", (), 0.1)
    first = Counter(OperatorBase.order([a, b], seed)[0].op_id
                    for seed in range(10_000))
    assert abs(first["a"] / 10_000 - 0.9) < 0.02


def test_order_deterministic_for_fixed_seed():
    cs = [Candidate(f"op{i}", (), w) for i, w in
          enumerate([0.5, 1.0, 0.25, 0.75])]
    assert OperatorBase.order(cs, 42) == OperatorBase.order(cs, 42)


def test_order_scale_invariance():
    cs = [Candidate("a", (), 0.9), Candidate("b", (), 0.1)]
    scaled = [Candidate(c.op_id, (), c.weight * 7.0) for c in cs]
    for seed in range(200):
        assert [c.op_id for c in OperatorBase.order(cs, seed)] == \
               [c.op_id for c in OperatorBase.order(scaled, seed)]


def test_add_operator_rejects_empty_body():
    names = NameGen()
    trig, x = note_close_trigger(names)
    with pytest.raises(OperatorError):
        OperatorBase(names).add(Operator("", trig, None, (), 1.0))


def test_add_operator_rejects_unbound_body_variable():
    names = NameGen()
    trig, x = note_close_trigger(names)
    bb = Builder(names)
    y = bb.obj()  # unrelated variable, not marked fresh
    bb.fact("orange", "hq", y)
    body = (DirectiveTemplate(DirectiveKind.FIND, bb.build()),)
    with pytest.raises(OperatorError, match="unbound body variable"):
        OperatorBase(names).add(Operator("", trig, None, body, 1.0))


def test_add_operator_rejects_bad_trigger_kind():
    names = NameGen()
    b = Builder(names)
    x = b.obj()
    b.fact("close", "hq", x)
    trig = Trigger(DirectiveKind.FCN, b.build())
    body = (DirectiveTemplate(DirectiveKind.NOTE, b.build()),)
    with pytest.raises(OperatorError):
        OperatorBase(names).add(Operator("", trig, None, body, 1.0))


def test_add_duplicate_operator_coalesces():
    names = NameGen()
    ops = OperatorBase(names)
    o1 = ops.add(make_find_operator(names, "striped", pref=0.6))
    o2 = ops.add(make_find_operator(names, "striped", pref=0.9))
    assert o1 == o2 and len(ops) == 1
    assert ops.get(o1).preference == pytest.approx(0.9)


def test_trigger_gating_never_lists_unmatched_operator():
    names = NameGen()
    ops = OperatorBase(names)
    trig, x = note_close_trigger(names)
    bb = Builder(names)
    bb.obj(id=x)
    bb.fact(None, "ako", x)
    fresh = frozenset(n for n in bb.build().node_ids()
                      if n not in trig.pattern.node_ids())
    ops.add(Operator("", trig, None,
                     (DirectiveTemplate(DirectiveKind.FIND, bb.build()),),
                     1.0, fresh=fresh))
    # focus about something striped, not close: trigger does not match
    pay = Builder(names)
    pay.fact("striped", "hq", pay.obj(id="obj-1"))
    assert ops.applicable(DirectiveKind.NOTE, pay.build(),
                          wm_with_close(names)) == []
