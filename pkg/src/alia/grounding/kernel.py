"""Grounding kernel contract and the simulated implementation.

Grounding functions never return data through their call interface: they
enqueue attention posts and success/failure notices, both consumed by the
engine at the start of the next cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from ..config import EngineConfig
from ..kinds import DirectiveKind
from ..memory import FocusKind, FocusSource
from ..semnet import Builder, Graphlet, NameGen, match
from . import acts
from .motor import MotorSystem, Notice
from .vision import classify_colors, stripedness
from .world import World


@dataclass
class PendingPost:
    payload: Graphlet
    source: FocusSource = FocusSource.GROUNDING
    kind: FocusKind = FocusKind.ASSERTION
    tag: DirectiveKind = DirectiveKind.NOTE


@dataclass(frozen=True)
class Invocation:
    fcn: str
    args: Tuple[Tuple[str, str], ...] = ()

    def arg(self, name: str, default: str = "") -> str:
        return dict(self.args).get(name, default)


@dataclass
class _Probe:
    name: str
    kinds: frozenset
    pattern: Graphlet
    arg_vars: Tuple[Tuple[str, str, str], ...]  # (arg name, var id, "id"|"lex")


class GroundingKernel:
    """Base contract. The null kernel knows no functions."""

    def probe(self, kind: DirectiveKind, payload: Graphlet) -> Optional[Invocation]:
        return None

    def knows(self, name: str) -> bool:
        return False

    def invoke(self, inv: Invocation, caller: str) -> None:
        self._notices.append(Notice(caller, False, f"unknown function {inv.fcn}"))

    def tick(self, cycle: int) -> None:
        pass

    def __init__(self):
        self._posts: List[PendingPost] = []
        self._notices: List[Notice] = []
        self._speech: List[str] = []

    def drain_posts(self) -> List[PendingPost]:
        out, self._posts = self._posts, []
        return out

    def drain_notices(self) -> List[Notice]:
        out, self._notices = self._notices, []
        return out

    def drain_speech(self) -> List[str]:
        out, self._speech = self._speech, []
        return out


class SimulatedKernel(GroundingKernel):
    """Grounding against the simulated world: continuous detection and
    proximity alerts, deliberate perception (class_color, det_texture),
    and the discrete motor functions."""

    PERCEPTION = ("class_color", "det_texture")

    def __init__(self, world: World, cfg: EngineConfig, names: NameGen):
        super().__init__()
        self.world = world
        self.cfg = cfg
        self.names = names
        self.motor = MotorSystem(cfg)
        self._latched: set = set()
        self._probes = self._build_probes()
        self.invocations: List[str] = []   # audit trail for traces and tests

    # ------------------------------------------------------------ probes

    def _build_probes(self) -> List[_Probe]:
        pn = NameGen()  # probe patterns live outside engine namespaces
        probes: List[_Probe] = []

        b = Builder(pn)
        x = b.obj()
        c = b.fact(None, "hq", x)
        b.fact("color", "ako", c)
        probes.append(_Probe("class_color",
                             frozenset({DirectiveKind.FIND, DirectiveKind.CHK}),
                             b.build(), (("target", x, "id"),)))

        b = Builder(pn)
        x = b.obj()
        b.fact("striped", "hq", x)
        probes.append(_Probe("det_texture",
                             frozenset({DirectiveKind.FIND, DirectiveKind.CHK}),
                             b.build(), (("target", x, "id"),)))

        do = frozenset({DirectiveKind.DO})
        for verb in sorted(acts.DIRECTIONAL_VERBS):
            b = Builder(pn)
            act = b.pred(verb)
            d = b.obj()
            b.link(act, "dir", d)
            probes.append(_Probe(verb, do, b.build(), (("dir", d, "lex"),)))
        for verb in sorted(acts.TRANSITIVE_VERBS):
            b = Builder(pn)
            act = b.pred(verb)
            t = b.obj()
            b.link(act, "obj", t)
            probes.append(_Probe(verb, do, b.build(), (("patient", t, "id"),)))
        for verb in ("stop", "beep"):
            b = Builder(pn)
            act = b.pred(verb)
            a = b.obj()
            b.link(act, "agt", a)
            probes.append(_Probe(verb, do, b.build(), ()))
        b = Builder(pn)
        act = b.pred("say")
        t = b.obj()
        b.link(act, "arg", t)
        probes.append(_Probe("say", do, b.build(), (("text", t, "lex"),)))
        return probes

    def probe(self, kind: DirectiveKind, payload: Graphlet) -> Optional[Invocation]:
        for spec in self._probes:
            if kind not in spec.kinds:
                continue
            for binding in match(spec.pattern, payload, 0.0, grounded=set()):
                args = []
                for name, var, mode in spec.arg_vars:
                    sid = binding[var]
                    if mode == "id":
                        args.append((name, sid))
                    else:
                        args.append((name, payload.node(sid).lex or ""))
                return Invocation(spec.name, tuple(args))
        return None

    def knows(self, name: str) -> bool:
        return name in self.PERCEPTION or name in acts.MOTOR_VERBS

    # ------------------------------------------------------------ invoke

    def invoke(self, inv: Invocation, caller: str) -> None:
        self.invocations.append(inv.fcn)
        if inv.fcn == "class_color":
            self._class_color(inv.arg("target"), caller)
        elif inv.fcn == "det_texture":
            self._det_texture(inv.arg("target"), caller)
        elif inv.fcn in acts.MOTOR_VERBS:
            args = dict(inv.args)
            self.motor.start(inv.fcn, args, caller, self._notices)
        else:
            self._notices.append(Notice(caller, False,
                                        f"unknown function {inv.fcn}"))

    def _class_color(self, target: str, caller: str) -> None:
        obj = self.world.object_by_tracked(target)
        if obj is None:
            self._notices.append(Notice(caller, False, f"{target} untracked"))
            return
        found = classify_colors(obj.pixels, self.cfg)
        for color, _share in found:
            self._posts.append(PendingPost(acts.color_note(self.names, target, color)))
        if found:
            self._notices.append(Notice(caller, True, "class_color"))
        else:
            self._notices.append(Notice(caller, False, "no dominant color"))

    def _det_texture(self, target: str, caller: str) -> None:
        obj = self.world.object_by_tracked(target)
        if obj is None:
            self._notices.append(Notice(caller, False, f"{target} untracked"))
            return
        report = stripedness(obj.pixels, self.cfg)
        payload = acts.quality_query(self.names, "striped", target_id=target,
                                     negated=not report.striped)
        self._posts.append(PendingPost(payload))
        self._notices.append(Notice(caller, True, "det_texture"))

    # ------------------------------------------------------------ continuous

    def tick(self, cycle: int) -> None:
        self.world.tick()
        self.motor.tick(self.world, self._notices)
        self._speech.extend(self.motor.drain_speech())
        self._watch_proximity()

    def _watch_proximity(self) -> None:
        """Post one close-assertion per entry into the personal space
        (front arc, within proximity_cm)."""
        for obj in self.world.objects:
            dist = self.world.distance_to_robot(obj)
            inside = (dist <= self.cfg.proximity_cm
                      and abs(self.world.bearing_offset(obj)) <= self.cfg.arc_deg)
            if inside:
                if obj.oid in self._latched:
                    continue
                self._latched.add(obj.oid)
                if obj.tracked is None:
                    obj.tracked = self.names.fresh("obj")
                self._posts.append(PendingPost(
                    acts.quality_query(self.names, "close", target_id=obj.tracked)))
            else:
                self._latched.discard(obj.oid)
