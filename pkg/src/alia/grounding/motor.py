"""Discrete motor actions: fixed-quantum moves spanning several cycles,
with wheels, gripper, lift, and voice as independent actuators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List

from ..config import EngineConfig
from .world import World


@dataclass
class Notice:
    caller: str
    ok: bool
    detail: str = ""


@dataclass
class _Action:
    verb: str
    actuator: str
    caller: str
    remaining: float = 0.0     # cm or degrees left
    sign: float = 1.0          # +1 forward/left, -1 backward/right
    target: str = ""           # gripper/lift target state or say text
    cycles: int = 0


_DIR_SIGNS = {"forward": 1.0, "backward": -1.0, "back": -1.0,
              "left": 1.0, "right": -1.0, "around": 1.0}


class MotorSystem:
    def __init__(self, cfg: EngineConfig):
        self.cfg = cfg
        self._active: Dict[str, _Action] = {}
        self._speech: List[str] = []

    def busy(self, actuator: str) -> bool:
        return actuator in self._active

    def drain_speech(self) -> List[str]:
        out, self._speech = self._speech, []
        return out

    # ------------------------------------------------------------ dispatch

    def start(self, verb: str, args: Dict[str, str], caller: str,
              notices: List[Notice]) -> None:
        cfg = self.cfg
        if verb in ("move", "drive"):
            direction = args.get("dir", "forward")
            sign = _DIR_SIGNS.get(direction)
            if sign is None or direction in ("left", "right", "around"):
                notices.append(Notice(caller, False, f"cannot {verb} {direction}"))
                return
            self._claim("wheels", _Action(verb, "wheels", caller,
                                          remaining=cfg.drive_step_cm,
                                          sign=sign), notices)
        elif verb == "turn":
            direction = args.get("dir", "left")
            if direction == "around":
                amount, sign = 180.0, 1.0
            elif direction in ("left", "right"):
                amount, sign = cfg.turn_step_deg, _DIR_SIGNS[direction]
            else:
                notices.append(Notice(caller, False, f"cannot turn {direction}"))
                return
            self._claim("wheels", _Action(verb, "wheels", caller,
                                          remaining=amount, sign=sign), notices)
        elif verb == "stop":
            # halting needs no clearance; cancel any wheel action
            stopped = self._active.pop("wheels", None)
            if stopped is not None:
                notices.append(Notice(stopped.caller, False, "interrupted by stop"))
            self._claim("wheels", _Action(verb, "wheels", caller, cycles=1), notices)
        elif verb in ("grab", "release"):
            state = "closed" if verb == "grab" else "open"
            self._claim("gripper", _Action(verb, "gripper", caller,
                                           target=state, cycles=1), notices)
        elif verb in ("raise", "lower"):
            state = "up" if verb == "raise" else "down"
            self._claim("lift", _Action(verb, "lift", caller,
                                        target=state, cycles=1), notices)
        elif verb == "beep":
            self._claim("voice", _Action(verb, "voice", caller,
                                         target="beep", cycles=1), notices)
        elif verb == "say":
            text = args.get("text", "")
            self._claim("voice", _Action(verb, "voice", caller,
                                         target=text, cycles=1), notices)
        else:
            notices.append(Notice(caller, False, f"unknown motor verb {verb!r}"))

    def _claim(self, actuator: str, action: _Action,
               notices: List[Notice]) -> None:
        if actuator in self._active:
            notices.append(Notice(action.caller, False, f"{actuator} busy"))
            return
        self._active[actuator] = action

    # ------------------------------------------------------------ advance

    def tick(self, world: World, notices: List[Notice]) -> None:
        done: List[str] = []
        for actuator, act in self._active.items():
            if actuator == "wheels" and act.verb in ("move", "drive"):
                step = min(self.cfg.speed_cm, act.remaining)
                rad = math.radians(world.robot.heading)
                nx = world.robot.x + math.cos(rad) * step * act.sign
                ny = world.robot.y + math.sin(rad) * step * act.sign
                if not world.inside(nx, ny, self.cfg.robot_radius_cm):
                    notices.append(Notice(act.caller, False, "wall collision"))
                    done.append(actuator)
                    continue
                world.robot.x, world.robot.y = nx, ny
                act.remaining -= step
                if act.remaining <= 1e-9:
                    notices.append(Notice(act.caller, True, act.verb))
                    done.append(actuator)
            elif actuator == "wheels" and act.verb == "turn":
                step = min(self.cfg.turn_rate_deg, act.remaining)
                world.robot.heading = (world.robot.heading + step * act.sign) % 360.0
                act.remaining -= step
                if act.remaining <= 1e-9:
                    notices.append(Notice(act.caller, True, act.verb))
                    done.append(actuator)
            else:
                act.cycles -= 1
                if act.cycles <= 0:
                    if act.actuator == "gripper":
                        world.robot.gripper = act.target
                    elif act.actuator == "lift":
                        world.robot.lift = act.target
                    elif act.actuator == "voice":
                        self._speech.append(act.target)
                    notices.append(Notice(act.caller, True, act.verb))
                    done.append(actuator)
        for actuator in done:
            self._active.pop(actuator, None)
