"""Forward-chaining rule engine. The halo is recomputed from scratch each
cycle and deduction stops after two steps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .semnet import Binding, Graphlet, NameGen, match, instantiate, union


class RuleError(ValueError):
    """A rule violated its construction invariants."""


@dataclass(frozen=True)
class Rule:
    id: str
    condition: Graphlet
    conclusion: Graphlet
    belief: float
    provenance: str = ""

    @property
    def fresh(self) -> FrozenSet[str]:
        cond = set(self.condition.node_ids())
        return frozenset(n for n in self.conclusion.node_ids() if n not in cond)

    @property
    def shared(self) -> FrozenSet[str]:
        cond = set(self.condition.node_ids())
        return frozenset(n for n in self.conclusion.node_ids() if n in cond)


@dataclass
class HaloFact:
    id: str
    graphlet: Graphlet
    step: int
    rule_id: str
    binding: Binding
    belief: float
    supports: Tuple[str, ...] = ()   # ids of step-1 facts this one chained from


def _same_rule(a: Rule, b: Rule) -> bool:
    if len(a.condition) != len(b.condition) or len(a.conclusion) != len(b.conclusion):
        return False
    if len(a.condition.links) != len(b.condition.links):
        return False
    for cb in match(a.condition, b.condition, 0.0, grounded=set()):
        if len(set(cb.values())) != len(cb):
            continue
        if any(a.condition.node(p).lex != b.condition.node(s).lex
               for p, s in cb.items()):
            continue
        seed = {v: cb[v] for v in a.shared}
        for xb in match(a.conclusion, b.conclusion, 0.0, seed=seed, grounded=set()):
            if len(set(xb.values())) != len(xb):
                continue
            if all(a.conclusion.node(p).lex == b.conclusion.node(s).lex
                   for p, s in xb.items()):
                return True
    return False


class RuleBase:
    """Insertion-ordered rule store with structural deduplication."""

    def __init__(self, names: Optional[NameGen] = None):
        self.names = names or NameGen()
        self._rules: Dict[str, Rule] = {}

    def __len__(self) -> int:
        return len(self._rules)

    def __iter__(self):
        return iter(self._rules.values())

    def get(self, rule_id: str) -> Rule:
        return self._rules[rule_id]

    def add(self, rule: Rule) -> str:
        """Validate and store; a structural duplicate coalesces (the higher
        belief wins) and returns the existing id."""
        if not 0.0 < rule.belief <= 1.0:
            raise RuleError(f"rule belief {rule.belief} outside (0,1]")
        if not rule.condition or not rule.conclusion:
            raise RuleError("rule condition and conclusion must be nonempty")
        if not rule.shared:
            raise RuleError("rule condition and conclusion share no node")
        for old in self._rules.values():
            if _same_rule(rule, old):
                if rule.belief > old.belief:
                    self._rules[old.id] = Rule(old.id, old.condition,
                                               old.conclusion, rule.belief,
                                               old.provenance)
                return old.id
        rid = rule.id or self.names.fresh("rule")
        stored = Rule(rid, rule.condition, rule.conclusion, rule.belief,
                      rule.provenance)
        self._rules[rid] = stored
        return rid

    # ------------------------------------------------------------ derivation

    def derive(self, working: Graphlet, names: NameGen,
               min_belief: float = 0.5) -> List[HaloFact]:
        """Recompute all implications of working memory, two steps deep.

        Pass 1 matches every rule against working memory; pass 2 matches
        against working memory plus the step-1 facts. Conclusions already
        present in working memory are skipped, which keeps the halo and
        working memory disjoint.
        """
        wm_ids = set(working.node_ids())
        produced: set = set()
        facts: List[HaloFact] = []
        owner: Dict[str, str] = {}  # fresh node id -> fact id

        def run_pass(step: int, store) -> List[HaloFact]:
            new: List[HaloFact] = []
            store_g = store if isinstance(store, Graphlet) else union(*store)
            for rule in self._rules.values():
                for binding in match(rule.condition, store_g, min_belief,
                                     grounded=set()):
                    key = (rule.id, frozenset(binding.items()))
                    if key in produced:
                        continue
                    produced.add(key)
                    ante = min(store_g.node(v).belief for v in binding.values())
                    belief = max(0.0, min(1.0, rule.belief * ante))
                    g = instantiate(rule.conclusion, binding, belief,
                                    fresh=rule.fresh, names=names)
                    if _present(working, g, wm_ids):
                        continue
                    supports = tuple(sorted({owner[v] for v in binding.values()
                                             if v in owner}))
                    fact = HaloFact(names.fresh("halo"), g, step, rule.id,
                                    dict(binding), belief, supports)
                    new.append(fact)
            return new

        step1 = run_pass(1, working)
        facts.extend(step1)
        for f in step1:
            for nid in f.graphlet.node_ids():
                if nid not in wm_ids:
                    owner[nid] = f.id
        if step1:
            facts.extend(run_pass(2, [working] + [f.graphlet for f in step1]))
        return facts


def _present(working: Graphlet, fact: Graphlet, wm_ids: set) -> bool:
    for binding in match(fact, working, 0.0, grounded=wm_ids):
        if all(fact.node(p).lex == working.node(s).lex for p, s in binding.items()):
            return True
    return False
