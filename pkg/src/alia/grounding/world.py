"""Simulated stage: a bounded plane, one robot, and segmented objects
carrying synthetic pixel grids."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from ..config import EngineConfig


class ScenarioError(ValueError):
    """A scenario file could not be interpreted."""


@dataclass
class PixelGrid:
    rgb: np.ndarray           # (h, w, 3) floats in [0,1]
    mask: np.ndarray          # (h, w) booleans, nonempty

    def __post_init__(self):
        self.rgb = np.asarray(self.rgb, dtype=float)
        if self.mask is None:
            self.mask = np.ones(self.rgb.shape[:2], dtype=bool)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.rgb.ndim != 3 or self.rgb.shape[2] != 3:
            raise ScenarioError("pixel grid must be (h, w, 3)")
        if self.mask.shape != self.rgb.shape[:2]:
            raise ScenarioError("mask shape does not match the grid")
        if not self.mask.any():
            raise ScenarioError("object mask is empty")

    @staticmethod
    def uniform(width: int, height: int, rgb: Tuple[float, float, float]) -> "PixelGrid":
        g = np.ones((height, width, 3)) * np.asarray(rgb)
        return PixelGrid(g, np.ones((height, width), dtype=bool))

    @staticmethod
    def banded(width: int, height: int, colors: List[Tuple[float, float, float]],
               bands: int, horizontal: bool = True) -> "PixelGrid":
        """Alternating stripes; `bands` stripes cycling through `colors`."""
        g = np.zeros((height, width, 3))
        span = height if horizontal else width
        size = max(1, span // bands)
        for i in range(bands):
            lo, hi = i * size, span if i == bands - 1 else (i + 1) * size
            c = np.asarray(colors[i % len(colors)])
            if horizontal:
                g[lo:hi, :, :] = c
            else:
                g[:, lo:hi, :] = c
        return PixelGrid(g, np.ones((height, width), dtype=bool))


@dataclass
class WorldObject:
    oid: str
    x: float
    y: float
    radius: float
    pixels: PixelGrid
    vx: float = 0.0
    vy: float = 0.0
    tracked: Optional[str] = None   # node id, stable once bound


@dataclass
class RobotState:
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0            # degrees, normalized to [0, 360)
    gripper: str = "open"
    lift: str = "down"

    def normalize(self) -> None:
        self.heading %= 360.0


class World:
    def __init__(self, bounds: Tuple[float, float, float, float] = (-100, -100, 100, 100),
                 robot: Optional[RobotState] = None,
                 objects: Optional[List[WorldObject]] = None):
        self.bounds = bounds
        self.robot = robot or RobotState()
        self.objects = objects or []
        self.cycle = 0

    def object_by_tracked(self, node_id: str) -> Optional[WorldObject]:
        for o in self.objects:
            if o.tracked == node_id:
                return o
        return None

    def object(self, oid: str) -> WorldObject:
        for o in self.objects:
            if o.oid == oid:
                return o
        raise KeyError(oid)

    def inside(self, x: float, y: float, inset: float = 0.0) -> bool:
        x0, y0, x1, y1 = self.bounds
        return x0 + inset <= x <= x1 - inset and y0 + inset <= y <= y1 - inset

    def tick(self) -> None:
        self.cycle += 1
        for o in self.objects:
            if o.vx or o.vy:
                nx, ny = o.x + o.vx, o.y + o.vy
                if self.inside(nx, ny, o.radius):
                    o.x, o.y = nx, ny

    def distance_to_robot(self, o: WorldObject) -> float:
        return math.hypot(o.x - self.robot.x, o.y - self.robot.y)

    def bearing_offset(self, o: WorldObject) -> float:
        """Angle from the robot's heading to the object, in (-180, 180]."""
        bearing = math.degrees(math.atan2(o.y - self.robot.y, o.x - self.robot.x))
        diff = (bearing - self.robot.heading) % 360.0
        if diff > 180.0:
            diff -= 360.0
        return diff


# ------------------------------------------------------------ scenario files

_HEX = re.compile(r"^[0-9a-fA-F]{6}$")


def _hex_rgb(tok: str) -> Tuple[float, float, float]:
    if not _HEX.match(tok):
        raise ScenarioError(f"bad hex color {tok!r}")
    return (int(tok[0:2], 16) / 255.0, int(tok[2:4], 16) / 255.0,
            int(tok[4:6], 16) / 255.0)


def _read_ppm(path: Path) -> np.ndarray:
    data = path.read_bytes()
    if data[:2] not in (b"P3", b"P6"):
        raise ScenarioError(f"{path}: not a PPM file")
    # strip comments, then parse header tokens
    if data[:2] == b"P3":
        toks = [t for t in re.sub(rb"#[^\n]*", b"", data).split()]
        w, h, maxv = int(toks[1]), int(toks[2]), int(toks[3])
        vals = np.array([int(t) for t in toks[4:4 + w * h * 3]], dtype=float)
    else:
        m = re.match(rb"P6\s+(?:#[^\n]*\s+)*(\d+)\s+(\d+)\s+(\d+)\s", data)
        if not m:
            raise ScenarioError(f"{path}: bad PPM header")
        w, h, maxv = int(m.group(1)), int(m.group(2)), int(m.group(3))
        vals = np.frombuffer(data[m.end():m.end() + w * h * 3],
                             dtype=np.uint8).astype(float)
    return (vals / maxv).reshape(h, w, 3)


def load_scenario(text: str, config: EngineConfig,
                  base_dir: Optional[Path] = None) -> World:
    """Parse a scenario: world bounds, config overrides, robot pose, and
    objects with pixel grids (inline hex rows, generators, or PPM files)."""
    world = World()
    lines = text.splitlines()
    i = 0
    pending: Optional[WorldObject] = None

    def flush():
        nonlocal pending
        if pending is not None:
            if pending.pixels is None:
                raise ScenarioError(f"object {pending.oid} has no pixels")
            world.objects.append(pending)
            pending = None

    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head == "world":
                world.bounds = tuple(float(v) for v in parts[1:5])
            elif head == "set":
                config.set(parts[1], parts[2])
            elif head == "robot":
                world.robot = RobotState(float(parts[1]), float(parts[2]),
                                         float(parts[3]) if len(parts) > 3 else 0.0)
                world.robot.normalize()
            elif head == "object":
                flush()
                pending = WorldObject(parts[1], float(parts[2]), float(parts[3]),
                                      float(parts[4]), None)  # type: ignore[arg-type]
            elif head == "vel":
                if pending is None:
                    raise ScenarioError("vel outside an object block")
                pending.vx, pending.vy = float(parts[1]), float(parts[2])
            elif head == "pixels":
                if pending is None:
                    raise ScenarioError("pixels outside an object block")
                mode = parts[1]
                if mode == "uniform":
                    w, h = int(parts[2]), int(parts[3])
                    pending.pixels = PixelGrid.uniform(w, h, _hex_rgb(parts[4]))
                elif mode == "banded":
                    w, h, bands = int(parts[2]), int(parts[3]), int(parts[4])
                    colors = [_hex_rgb(t) for t in parts[5:]]
                    pending.pixels = PixelGrid.banded(w, h, colors, bands)
                elif mode == "file":
                    path = (base_dir or Path(".")) / parts[2]
                    pending.pixels = PixelGrid(_read_ppm(path), None)
                elif mode == "inline":
                    w, h = int(parts[2]), int(parts[3])
                    rows = []
                    for _ in range(h):
                        rows.append([_hex_rgb(t) for t in lines[i].split()])
                        i += 1
                    grid = np.array(rows)
                    if grid.shape[:2] != (h, w):
                        raise ScenarioError("inline pixel rows do not match size")
                    pending.pixels = PixelGrid(grid, None)
                else:
                    raise ScenarioError(f"unknown pixels mode {mode!r}")
            elif head == "mask":
                if pending is None or pending.pixels is None:
                    raise ScenarioError("mask before pixels")
                h = pending.pixels.rgb.shape[0]
                rows = []
                for _ in range(h):
                    rows.append([tok == "1" for tok in lines[i].split()])
                    i += 1
                pending.pixels = PixelGrid(pending.pixels.rgb, np.array(rows))
            else:
                raise ScenarioError(f"unknown directive {head!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(f"bad scenario line: {line!r}") from exc
    flush()
    return world


def load_scenario_file(path: Path, config: EngineConfig) -> World:
    path = Path(path)
    return load_scenario(path.read_text(), config, base_dir=path.parent)
