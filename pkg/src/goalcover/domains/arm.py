"""Planar k-link arm over a joint-angle lattice.

Joint angles are discretized: state coordinate k counts lattice steps of
``deg_per_step[k]`` degrees away from the zero pose, clamped to per-joint
limit steps. Forward kinematics maps a state to a chain of 2D segments;
a state is valid when every joint is within its limits and no link
segment touches an obstacle (circles and convex polygons).

Edges additionally sweep the straight joint-space interpolation between
both endpoints at a fixed number of interior poses, so a motion cannot
cut through an obstacle that both endpoints clear.

Scene file format: JSON, see :func:`load_arm_scene`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Sequence

from ..errors import ParseError
from ..lattice import (
    GoalRegionSpec,
    LatticeDomain,
    State,
    axis_primitives,
    full_primitives,
)

SCENE_FORMAT = "goalcover-arm-scene"
SCENE_VERSION = 1

Point = tuple[float, float]


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    """Euclidean distance from point ``p`` to segment ``a-b``."""
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    length_sq = dx * dx + dy * dy
    if length_sq == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / length_sq
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _orient(a: Point, b: Point, c: Point) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    return (
        min(a[0], b[0]) - 1e-12 <= p[0] <= max(a[0], b[0]) + 1e-12
        and min(a[1], b[1]) - 1e-12 <= p[1] <= max(a[1], b[1]) + 1e-12
    )


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    if ((o1 > 0) != (o2 > 0)) and ((o3 > 0) != (o4 > 0)) and o1 and o2 and o3 and o4:
        return True
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    if o4 == 0 and _on_segment(c, d, b):
        return True
    return False


class ArmObstacle:
    def hits_segment(self, a: Point, b: Point) -> bool:
        raise NotImplementedError

    def to_document(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Circle(ArmObstacle):
    center: Point
    radius: float

    def hits_segment(self, a: Point, b: Point) -> bool:
        return point_segment_distance(self.center, a, b) <= self.radius

    def to_document(self) -> dict:
        return {
            "type": "circle",
            "center": [self.center[0], self.center[1]],
            "radius": self.radius,
        }


@dataclass(frozen=True)
class ConvexPolygon(ArmObstacle):
    vertices: tuple[Point, ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("polygon needs at least 3 vertices")

    def contains(self, p: Point) -> bool:
        sign = 0
        n = len(self.vertices)
        for i in range(n):
            o = _orient(self.vertices[i], self.vertices[(i + 1) % n], p)
            if o == 0:
                continue
            if sign == 0:
                sign = 1 if o > 0 else -1
            elif (o > 0) != (sign > 0):
                return False
        return True

    def hits_segment(self, a: Point, b: Point) -> bool:
        if self.contains(a) or self.contains(b):
            return True
        n = len(self.vertices)
        return any(
            segments_intersect(a, b, self.vertices[i], self.vertices[(i + 1) % n])
            for i in range(n)
        )

    def to_document(self) -> dict:
        return {"type": "polygon", "vertices": [[x, y] for x, y in self.vertices]}


class PlanarArm(LatticeDomain):
    """Joint-lattice arm with swept-edge collision checking."""

    def __init__(
        self,
        link_lengths: Sequence[float],
        base: Point,
        deg_per_step: Sequence[float],
        limit_steps: Sequence[tuple[int, int]],
        goal_boxes: Sequence[GoalRegionSpec],
        obstacles: Sequence[ArmObstacle] = (),
        connectivity: str = "axis",
        sweep_points: int = 4,
        weights: Sequence[float] | None = None,
    ):
        self.link_lengths = tuple(float(l) for l in link_lengths)
        if any(l <= 0 for l in self.link_lengths):
            raise ValueError("link lengths must be positive")
        self.base = (float(base[0]), float(base[1]))
        self.deg_per_step = tuple(float(d) for d in deg_per_step)
        self.limit_steps = tuple((int(lo), int(hi)) for lo, hi in limit_steps)
        n = len(self.link_lengths)
        if not (len(self.deg_per_step) == len(self.limit_steps) == n):
            raise ValueError("need one resolution and one limit pair per joint")
        for lo, hi in self.limit_steps:
            if lo > hi:
                raise ValueError("joint limit lower step exceeds upper step")
        self.obstacles = tuple(obstacles)
        self.connectivity = connectivity
        if connectivity == "axis":
            primitives = axis_primitives(n)
        elif connectivity == "full":
            primitives = full_primitives(n)
        else:
            raise ParseError(f"unknown connectivity {connectivity!r}")
        if sweep_points < 0:
            raise ValueError("sweep_points must be >= 0")
        self.sweep_points = int(sweep_points)
        self._rad_per_step = tuple(math.radians(d) for d in self.deg_per_step)
        super().__init__(
            dimension=n,
            primitives=primitives,
            goal_boxes=goal_boxes,
            weights=weights,
            resolution=self.deg_per_step,
        )

    # -- kinematics ----------------------------------------------------

    def joint_points(self, steps: Sequence[float]) -> list[Point]:
        """Chain of joint positions (base first) for possibly fractional steps."""
        x, y = self.base
        points = [(x, y)]
        heading = 0.0
        for length, step, rad in zip(self.link_lengths, steps, self._rad_per_step):
            heading += step * rad
            x += length * math.cos(heading)
            y += length * math.sin(heading)
            points.append((x, y))
        return points

    def _pose_clear(self, steps: Sequence[float]) -> bool:
        points = self.joint_points(steps)
        for a, b in zip(points, points[1:]):
            for obstacle in self.obstacles:
                if obstacle.hits_segment(a, b):
                    return False
        return True

    # -- domain contract -----------------------------------------------

    def _valid(self, state: State) -> bool:
        if any(
            not lo <= c <= hi for c, (lo, hi) in zip(state, self.limit_steps)
        ):
            return False
        return self._pose_clear(state)

    def coordinate_bounds(self) -> tuple[tuple[int, int], ...]:
        return self.limit_steps

    def _edge_valid(self, a: State, b: State) -> bool:
        if not (self.is_valid(a) and self.is_valid(b)):
            return False
        # Interior sweep: limits are a box, so interpolants stay in-limit;
        # only the geometry needs re-checking.
        for i in range(1, self.sweep_points + 1):
            t = i / (self.sweep_points + 1)
            steps = [x + t * (y - x) for x, y in zip(a, b)]
            self.counters.edge_probes += 1
            if not self._pose_clear(steps):
                return False
        return True

    def config_document(self) -> dict:
        return {
            "type": "planar-arm",
            "version": SCENE_VERSION,
            "links": list(self.link_lengths),
            "base": [self.base[0], self.base[1]],
            "deg_per_step": list(self.deg_per_step),
            "limit_steps": [[lo, hi] for lo, hi in self.limit_steps],
            "connectivity": self.connectivity,
            "sweep_points": self.sweep_points,
            "weights": list(self.weights),
            "goal": [
                {"lower": list(b.lower), "upper": list(b.upper)}
                for b in self.goal_boxes
            ],
            "obstacles": [o.to_document() for o in self.obstacles],
        }


# -- scene files ---------------------------------------------------------


def _obstacle_from_document(doc: dict) -> ArmObstacle:
    kind = doc.get("type")
    if kind == "circle":
        return Circle(center=tuple(doc["center"]), radius=float(doc["radius"]))
    if kind == "polygon":
        return ConvexPolygon(vertices=tuple(tuple(v) for v in doc["vertices"]))
    raise ParseError(f"unknown obstacle type {kind!r}")


def load_arm_scene(source: IO[str] | str | dict) -> PlanarArm:
    """Parse a JSON scene document into a :class:`PlanarArm`."""
    if isinstance(source, dict):
        doc = source
    else:
        text = source if isinstance(source, str) else source.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"scene is not valid JSON: {exc}") from exc
    if doc.get("format") != SCENE_FORMAT:
        raise ParseError(f"not a {SCENE_FORMAT} document")
    if doc.get("version") != SCENE_VERSION:
        raise ParseError(f"unsupported scene version {doc.get('version')!r}")
    try:
        goal_docs = doc["goal"]
        if isinstance(goal_docs, dict):
            goal_docs = [goal_docs]
        goal_boxes = [
            GoalRegionSpec(tuple(g["lower"]), tuple(g["upper"])) for g in goal_docs
        ]
        return PlanarArm(
            link_lengths=doc["links"],
            base=tuple(doc.get("base", (0.0, 0.0))),
            deg_per_step=doc["deg_per_step"],
            limit_steps=[tuple(pair) for pair in doc["limit_steps"]],
            goal_boxes=goal_boxes,
            obstacles=[_obstacle_from_document(o) for o in doc.get("obstacles", [])],
            connectivity=doc.get("connectivity", "axis"),
            sweep_points=doc.get("sweep_points", 4),
            weights=doc.get("weights"),
        )
    except KeyError as exc:
        raise ParseError(f"scene missing field {exc}") from exc


def dump_arm_scene(arm: PlanarArm, sink: IO[str]) -> None:
    doc = arm.config_document()
    doc["format"] = SCENE_FORMAT
    doc.pop("type")
    json.dump(doc, sink, indent=2, sort_keys=True)
    sink.write("\n")
