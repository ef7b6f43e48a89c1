"""Engine tuning knobs. Every perception threshold here can be overridden
from a scenario file (`set <name> <value>` lines)."""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass
class EngineConfig:
    # memory
    linger: int = 5                 # cycles a deactivated item stays in attention
    min_belief: float = 0.5         # "believed" threshold for matching
    # director
    max_depth: int = 12             # action-tree depth limit
    tree_budget: int = 400          # cycles before a tree is abandoned
    # proximity / personal space
    proximity_cm: float = 10.0
    arc_deg: float = 45.0           # half-width of the front arc
    # motor quanta
    drive_step_cm: float = 20.0
    turn_step_deg: float = 30.0
    speed_cm: float = 5.0           # cm per cycle
    turn_rate_deg: float = 15.0     # degrees per cycle
    robot_radius_cm: float = 8.0
    # color classification
    sat_min: float = 0.25
    int_lo: float = 0.10
    int_hi: float = 0.95
    black_max: float = 0.20
    white_min: float = 0.80
    color_share_min: float = 0.20   # histogram share needed to report a color
    # stripedness
    sobel_ratio: float = 0.5        # threshold as a fraction of the max gradient
    stripe_min_lines: int = 3
    stripe_coverage_min: float = 0.10
    stripe_extent_frac: float = 0.20  # of the mask bounding-box diagonal
    # shell
    cycle_rate: float = 10.0        # live cycles per second (0 = unbounded)

    def set(self, name: str, raw: str) -> None:
        """Apply a `set name value` override, coercing to the field type."""
        for f in fields(self):
            if f.name == name:
                kind = type(getattr(self, name))
                setattr(self, name, kind(float(raw)) if kind in (int, float) else kind(raw))
                return
        raise KeyError(f"unknown config field {name!r}")
