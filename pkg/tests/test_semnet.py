from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alia.semnet import (
    Builder, Graphlet, NameGen, Node, NodeKind, RoleLink, StructuralError,
    canonical_signature, contains, dump, instantiate, load_dump, match,
    parse_arrow, render, structurally_equal, summary, union,
)

from oracles import brute_force_match


def close_assertion() -> Graphlet:
    b = Builder()
    x = b.obj(id="obj-1")
    b.fact("close", "hq", x)
    return b.build()


def color_assertion() -> Graphlet:
    b = Builder()
    x = b.obj(id="obj-1")
    o = b.fact("orange", "hq", x)
    b.fact("color", "ako", o)
    return b.build()


# ---------------------------------------------------------------- nodes

def test_node_belief_range_enforced():
    with pytest.raises(StructuralError):
        Node("n1", NodeKind.OBJECT, belief=1.5)
    with pytest.raises(StructuralError):
        Node("n1", NodeKind.OBJECT, belief=-0.1)


def test_lex_normalized():
    n = Node("n1", NodeKind.PREDICATE, lex="  Warm   Colored ")
    assert n.lex == "warm colored"


def test_graphlet_must_be_closed():
    n = Node("a", NodeKind.PREDICATE, "close")
    with pytest.raises(StructuralError):
        Graphlet([n], [RoleLink("a", "hq", "missing")])


def test_unregistered_role_rejected():
    with pytest.raises(StructuralError):
        RoleLink("a", "frobnicate", "b")


# ---------------------------------------------------------------- match

def test_match_single_quality():
    b = Builder()
    x = b.obj()
    b.fact("orange", "hq", x)
    pattern = b.build()
    store = color_assertion()
    bindings = list(match(pattern, store, 0.5))
    assert len(bindings) == 1
    assert bindings[0][x] == "obj-1"


def test_empty_pattern_matches_once():
    assert list(match(Graphlet(), color_assertion(), 0.5)) == [{}]
    assert list(match(Graphlet(), Graphlet(), 0.5)) == [{}]


def test_two_conjunct_pattern_counts_by_oracle():
    # 5 objects, exactly 2 carry both orange and striped
    b = Builder()
    objs = [b.obj() for _ in range(5)]
    for i, x in enumerate(objs):
        if i in (1, 3):
            b.fact("orange", "hq", x)
            b.fact("striped", "hq", x)
        elif i == 2:
            b.fact("orange", "hq", x)
    store = b.build()

    pb = Builder(NameGen(100))
    x = pb.obj()
    pb.fact("orange", "hq", x)
    pb.fact("striped", "hq", x)
    pattern = pb.build()

    got = list(match(pattern, store, 0.5))
    expect = brute_force_match(pattern, store, 0.5)
    assert len(got) == 2
    assert sorted(got, key=str) == sorted(expect, key=str)


def test_min_belief_gates_matches():
    b = Builder()
    x = b.obj()
    b.fact("orange", "hq", x, belief=0.4)
    store = b.build()
    pb = Builder(NameGen(50))
    px = pb.obj()
    pb.fact("orange", "hq", px)
    pattern = pb.build()
    assert list(match(pattern, store, 0.5)) == []
    assert len(list(match(pattern, store, 0.3))) == 1


def test_negation_discipline():
    b = Builder()
    x = b.obj()
    b.fact("striped", "hq", x, negated=True)
    store = b.build()
    pb = Builder(NameGen(50))
    px = pb.obj()
    pb.fact("striped", "hq", px)
    positive = pb.build()
    assert list(match(positive, store, 0.0)) == []
    nb = Builder(NameGen(60))
    nx = nb.obj()
    nb.fact("striped", "hq", nx, negated=True)
    assert len(list(match(nb.build(), store, 0.0))) == 1


def test_grounded_pattern_node_matches_only_itself():
    store = color_assertion()
    b = Builder(NameGen(30))
    x = b.obj(id="obj-1")  # grounded: the store has obj-1
    b.fact("orange", "hq", x)
    assert len(list(match(b.build(), store, 0.5))) == 1

    b2 = Builder(NameGen(40))
    other = b2.obj(id="obj-1")
    b2.fact("green", "hq", other)
    assert list(match(b2.build(), store, 0.5)) == []


def test_predicate_injectivity_object_sharing():
    # one store fact cannot satisfy two pattern conjuncts, but two
    # pattern objects may co-bind to one store object
    b = Builder()
    x = b.obj()
    b.fact("orange", "hq", x)
    store = b.build()
    pb = Builder(NameGen(70))
    p1 = pb.obj()
    pb.fact("orange", "hq", p1)
    pb.fact("orange", "hq", p1)
    assert list(match(pb.build(), store, 0.0)) == []

    qb = Builder(NameGen(80))
    a, c = qb.obj(), qb.obj()
    assert len(list(match(qb.build(), store, 0.0))) == 1  # both map to x


def test_determinism_same_sequence():
    store = color_assertion()
    b = Builder(NameGen(90))
    x = b.obj()
    pattern = b.build()
    assert list(match(pattern, store, 0.0)) == list(match(pattern, store, 0.0))


def _random_case(rng: random.Random):
    lexes = ["orange", "striped", "close", "black", None]
    sb = Builder(NameGen(0))
    n_store = rng.randint(1, 8)
    sids = []
    for i in range(n_store):
        if rng.random() < 0.5:
            sids.append(sb.obj(rng.choice(lexes)))
        else:
            sids.append(sb.pred(rng.choice(lexes),
                                belief=rng.choice([1.0, 0.8, 0.4]),
                                negated=rng.random() < 0.2))
    for _ in range(rng.randint(0, n_store * 2)):
        a, c = rng.choice(sids), rng.choice(sids)
        sb.link(a, rng.choice(["hq", "ako"]), c)
    store = sb.build()

    pb = Builder(NameGen(1000))
    n_pat = rng.randint(1, 4)
    pids = []
    for i in range(n_pat):
        if rng.random() < 0.5:
            pids.append(pb.obj(rng.choice(lexes)))
        else:
            pids.append(pb.pred(rng.choice(lexes), negated=rng.random() < 0.2))
    for _ in range(rng.randint(0, 3)):
        a, c = rng.choice(pids), rng.choice(pids)
        if a != c:
            pb.link(a, rng.choice(["hq", "ako"]), c)
    return pb.build(), store


def test_matcher_equals_brute_force_on_random_instances():
    rng = random.Random(7)
    for _ in range(200):
        pattern, store = _random_case(rng)
        got = sorted(match(pattern, store, 0.5), key=str)
        expect = sorted(brute_force_match(pattern, store, 0.5), key=str)
        assert got == expect


def test_matcher_soundness_bindings_present_in_store():
    rng = random.Random(11)
    for _ in range(100):
        pattern, store = _random_case(rng)
        for binding in match(pattern, store, 0.5):
            for l in pattern.links:
                assert store.has_link(binding[l.src], l.role, binding[l.dst])
            for nid, sid in binding.items():
                pn, sn = pattern.node(nid), store.node(sid)
                assert pn.kind is sn.kind and pn.negated == sn.negated
                if pn.lex is not None:
                    assert sn.lex == pn.lex


# ---------------------------------------------------------------- instantiate

def test_instantiate_rule_conclusion():
    tb = Builder(NameGen(200))
    x = tb.obj()
    t = tb.fact("tiger", "ako", x)
    template = tb.build()
    out = instantiate(template, {x: "obj-1"}, 0.9, fresh={t}, names=NameGen(500))
    preds = [n for n in out.nodes if n.kind is NodeKind.PREDICATE]
    assert len(preds) == 1 and preds[0].lex == "tiger"
    assert preds[0].belief == pytest.approx(0.9)
    assert out.has_link(preds[0].id, "ako", "obj-1")


def test_instantiate_identity_binding():
    g = color_assertion()
    binding = {nid: nid for nid in g.node_ids()}
    out = instantiate(g, binding, 1.0)
    assert out == g


def test_instantiate_zero_scale_annihilates():
    g = color_assertion()
    binding = {nid: nid for nid in g.node_ids()}
    out = instantiate(g, binding, 0.0)
    assert all(n.belief == 0.0 for n in out.nodes)


def test_instantiate_unbound_non_fresh_errors():
    tb = Builder(NameGen(210))
    x = tb.obj()
    tb.fact("tiger", "ako", x)
    with pytest.raises(StructuralError):
        instantiate(tb.build(), {x: "obj-1"}, 1.0)  # tiger node not fresh


# ---------------------------------------------------------------- render/dump

def test_render_close_assertion():
    assert render(close_assertion()) == "obj-1 <-hq- close"


def test_render_color_chain():
    assert render(color_assertion()) == "obj-1 <-hq- orange <-ako- color"


def test_render_empty():
    assert render(Graphlet()) == ""


def test_parse_arrow_round_trip():
    text = "obj-1 <-hq- orange <-ako- color"
    assert render(parse_arrow(text)) == text
    text2 = "obj-1 <-hq- close"
    assert render(parse_arrow(text2)) == text2


def test_dump_round_trip():
    g = color_assertion()
    again = load_dump(dump(g))
    assert again == g


def test_dump_quotes_multiword_lex():
    b = Builder()
    x = b.obj()
    b.fact("warm colored", "hq", x)
    g = b.build()
    again = load_dump(dump(g))
    assert structurally_equal(again, g)


# ---------------------------------------------------------------- helpers

def test_structurally_equal_ignores_ids_not_lex():
    a = close_assertion()
    b = Builder(NameGen(300))
    x = b.obj()
    b.fact("close", "hq", x)
    assert structurally_equal(a, b.build())
    c = Builder(NameGen(310))
    y = c.obj()
    c.fact("near", "hq", y)
    assert not structurally_equal(a, c.build())


def test_structurally_equal_respects_grounded_identity():
    a = close_assertion()  # about obj-1
    b = Builder(NameGen(320))
    y = b.obj(id="obj-2")
    b.fact("close", "hq", y)
    other = b.build()
    assert structurally_equal(a, other)  # free renaming
    assert not structurally_equal(a, other, grounded={"obj-1", "obj-2"})


def test_union_first_occurrence_wins():
    a = close_assertion()
    b = Builder()
    x = b.obj(id="obj-1", belief=0.2)
    g = union(a, b.build())
    assert g.node("obj-1").belief == 1.0


def test_canonical_signature_groups_isomorphs():
    a = close_assertion()
    b = Builder(NameGen(400))
    x = b.obj()
    b.fact("close", "hq", x)
    assert canonical_signature(a) == canonical_signature(b.build())
    assert canonical_signature(a) != canonical_signature(color_assertion())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_property_match_deterministic_and_sound(seed):
    rng = random.Random(seed)
    pattern, store = _random_case(rng)
    runs = [list(match(pattern, store, 0.5)) for _ in range(2)]
    assert runs[0] == runs[1]
    for binding in runs[0]:
        assert set(binding) == set(pattern.node_ids())
        for l in pattern.links:
            assert store.has_link(binding[l.src], l.role, binding[l.dst])


def test_summary_joins_chains():
    b = Builder()
    x = b.obj(id="obj-1")
    b.fact("close", "hq", x)
    b.fact("orange", "hq", x)
    s = summary(b.build())
    assert "obj-1 <-hq- close" in s and "obj-1 <-hq- orange" in s and " & " in s


def test_contains_fragment():
    store = color_assertion()
    b = Builder(NameGen(600))
    x = b.obj()
    b.fact("orange", "hq", x)
    assert contains(store, b.build())
    c = Builder(NameGen(610))
    y = c.obj()
    c.fact("green", "hq", y)
    assert not contains(store, c.build())
