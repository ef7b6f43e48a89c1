"""Grounding: the simulated world, perception, motor skills, and the
kernel contract binding them to the engine."""

from .kernel import GroundingKernel, Invocation, PendingPost, SimulatedKernel
from .motor import MotorSystem, Notice
from .vision import CANONICAL_COLORS, classify_colors, pixel_colors, rgb_to_hsi, stripedness
from .world import (
    PixelGrid, RobotState, ScenarioError, World, WorldObject,
    load_scenario, load_scenario_file,
)

__all__ = [
    "GroundingKernel", "Invocation", "PendingPost", "SimulatedKernel",
    "MotorSystem", "Notice",
    "CANONICAL_COLORS", "classify_colors", "pixel_colors", "rgb_to_hsi",
    "stripedness",
    "PixelGrid", "RobotState", "ScenarioError", "World", "WorldObject",
    "load_scenario", "load_scenario_file",
]
