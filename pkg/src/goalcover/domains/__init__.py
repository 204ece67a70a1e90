"""Concrete lattice domains: occupancy grids and a planar joint-lattice arm."""

from .arm import ArmObstacle, Circle, ConvexPolygon, PlanarArm, load_arm_scene
from .grid import GridWorld, dump_gridmap, load_gridmap

__all__ = [
    "ArmObstacle",
    "Circle",
    "ConvexPolygon",
    "GridWorld",
    "PlanarArm",
    "dump_gridmap",
    "load_arm_scene",
    "load_gridmap",
]
