from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alia.inference import HaloFact, Rule, RuleBase, RuleError
from alia.semnet import Builder, Graphlet, NameGen, render, structurally_equal


def make_rule(names, conds, concl, belief=1.0, rid=""):
    """conds: list of (lex, role); concl: (lex, role). The condition and
    conclusion share one variable object node."""
    cond = Builder(names)
    x_id = cond.obj()
    for lex, role in conds:
        cond.fact(lex, role, x_id)
    condition = cond.build()
    conc = Builder(names)
    conc.obj(id=x_id)
    lex, role = concl
    conc.fact(lex, role, x_id)
    conclusion = conc.build()
    return Rule(rid, condition, conclusion, belief)


def tiger_rule(names, belief=0.8):
    return make_rule(names, [("orange", "hq"), ("striped", "hq")],
                     ("tiger", "ako"), belief)


def working_orange_striped(names):
    b = Builder(names)
    x = b.obj(id="obj-1")
    b.fact("orange", "hq", x)
    b.fact("striped", "hq", x)
    return b.build()


def test_tiger_rule_derives_halo_fact():
    names = NameGen()
    rb = RuleBase(names)
    rb.add(tiger_rule(names))
    working = working_orange_striped(names)
    facts = rb.derive(working, names)
    assert len(facts) == 1
    f = facts[0]
    assert f.step == 1
    assert "obj-1 <-ako- tiger" in render(f.graphlet)
    assert f.belief == pytest.approx(0.8)


def test_second_step_uses_first_step_fact():
    names = NameGen()
    rb = RuleBase(names)
    rb.add(tiger_rule(names))
    rb.add(make_rule(names, [("tiger", "ako")], ("animal", "ako"), 1.0))
    working = working_orange_striped(names)
    facts = rb.derive(working, names)
    steps = {render(f.graphlet).split(" <-ako- ")[-1]: f.step for f in facts
             if "<-ako-" in render(f.graphlet)}
    assert steps.get("tiger") == 1
    assert steps.get("animal") == 2


def _chain_rules(names, labels):
    """labels = [a, b, c, ...]; rules a->b, b->c, ..."""
    rules = []
    for cur, nxt in zip(labels, labels[1:]):
        rules.append(make_rule(names, [(cur, "hq")], (nxt, "hq"), 1.0))
    return rules


def test_chain_truncated_at_two_steps():
    names = NameGen()
    rb = RuleBase(names)
    for r in _chain_rules(names, ["a", "b", "c", "d"]):
        rb.add(r)
    b = Builder(names)
    x = b.obj()
    b.fact("a", "hq", x)
    facts = rb.derive(b.build(), names)
    derived = {n.lex for f in facts for n in f.graphlet.nodes if n.lex}
    assert "b" in derived and "c" in derived and "d" not in derived


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 6), st.integers(0, 10 ** 6))
def test_property_depth_bound_on_random_chains(length, seed):
    rng = random.Random(seed)
    labels = [f"q{seed % 97}x{i}" for i in range(length + 1)]
    names = NameGen()
    rb = RuleBase(names)
    rules = _chain_rules(names, labels)
    rng.shuffle(rules)
    for r in rules:
        rb.add(r)
    b = Builder(names)
    x = b.obj()
    b.fact(labels[0], "hq", x)
    facts = rb.derive(b.build(), names)
    derived = {n.lex for f in facts for n in f.graphlet.nodes if n.lex}
    expected = set(labels[1:1 + min(length, 2)])
    assert derived == expected
    assert {f.step for f in facts} <= {1, 2}


def test_ephemeral_re_derivation_is_structurally_identical():
    names = NameGen()
    rb = RuleBase(names)
    rb.add(tiger_rule(names))
    working = working_orange_striped(names)
    f1 = rb.derive(working, NameGen(10_000))
    f2 = rb.derive(working, NameGen(10_000))
    assert len(f1) == len(f2)
    for a, b in zip(f1, f2):
        assert structurally_equal(a.graphlet, b.graphlet)
        assert a.belief == b.belief and a.step == b.step


def test_belief_product_of_rule_and_min_antecedent():
    names = NameGen()
    rb = RuleBase(names)
    rb.add(tiger_rule(names, belief=0.8))
    b = Builder(names)
    x = b.obj(id="obj-1")
    b.fact("orange", "hq", x, belief=0.9)
    b.fact("striped", "hq", x, belief=0.7)
    facts = rb.derive(b.build(), names)
    assert facts[0].belief == pytest.approx(0.8 * 0.7)


def test_belief_monotonicity():
    names = NameGen()
    rb = RuleBase(names)
    rb.add(tiger_rule(names, belief=0.8))
    rb.add(make_rule(names, [("tiger", "ako")], ("animal", "ako"), 0.9))
    working = working_orange_striped(names)
    facts = rb.derive(working, names, min_belief=0.5)
    for f in facts:
        rule = rb.get(f.rule_id)
        assert f.belief <= rule.belief + 1e-12


def test_fact_below_threshold_not_chained():
    names = NameGen()
    rb = RuleBase(names)
    rb.add(tiger_rule(names, belief=0.4))  # below min_belief 0.5
    rb.add(make_rule(names, [("tiger", "ako")], ("animal", "ako"), 1.0))
    working = working_orange_striped(names)
    facts = rb.derive(working, names, min_belief=0.5)
    derived = {n.lex for f in facts for n in f.graphlet.nodes if n.lex}
    assert "tiger" in derived and "animal" not in derived


def test_conclusion_already_in_working_memory_skipped():
    names = NameGen()
    rb = RuleBase(names)
    rb.add(tiger_rule(names))
    b = Builder(names)
    x = b.obj(id="obj-1")
    b.fact("orange", "hq", x)
    b.fact("striped", "hq", x)
    b.fact("tiger", "ako", x)
    facts = rb.derive(b.build(), names)
    assert facts == []


def test_add_rule_counts_and_idempotence():
    names = NameGen()
    rb = RuleBase(names)
    rb.add(make_rule(names, [("black", "hq"), ("white", "hq"), ("striped", "hq")],
                     ("zebra", "ako"), 1.0))
    assert len(rb) == 1
    rid1 = rb.add(tiger_rule(names))
    assert len(rb) == 2
    rid2 = rb.add(tiger_rule(names))
    assert rid2 == rid1 and len(rb) == 2


def test_duplicate_rule_keeps_max_belief():
    names = NameGen()
    rb = RuleBase(names)
    rid = rb.add(tiger_rule(names, belief=0.6))
    rb.add(tiger_rule(names, belief=0.9))
    assert rb.get(rid).belief == pytest.approx(0.9)


def test_zero_belief_rule_rejected():
    names = NameGen()
    rb = RuleBase(names)
    with pytest.raises(RuleError):
        rb.add(tiger_rule(names, belief=0.0))


def test_rule_without_shared_variable_rejected():
    names = NameGen()
    b = Builder(names)
    x = b.obj()
    b.fact("orange", "hq", x)
    cond = b.build()
    c = Builder(names)
    y = c.obj()
    c.fact("tiger", "ako", y)
    with pytest.raises(RuleError):
        RuleBase(names).add(Rule("", cond, c.build(), 1.0))


def test_contradictory_facts_may_coexist():
    names = NameGen()
    rb = RuleBase(names)
    r1 = make_rule(names, [("orange", "hq")], ("striped", "hq"), 0.6)
    # negated conclusion variant
    b = Builder(names)
    x = b.obj()
    b.fact("black", "hq", x)
    cond = b.build()
    c = Builder(names)
    c.obj(id=x)
    c.fact("striped", "hq", x, negated=True)
    r2 = Rule("", cond, c.build(), 0.7)
    rb.add(r1)
    rb.add(r2)
    w = Builder(names)
    o = w.obj()
    w.fact("orange", "hq", o)
    w.fact("black", "hq", o)
    facts = rb.derive(w.build(), names)
    flags = sorted((n.lex, n.negated) for f in facts for n in f.graphlet.nodes
                   if n.lex == "striped")
    assert flags == [("striped", False), ("striped", True)]
