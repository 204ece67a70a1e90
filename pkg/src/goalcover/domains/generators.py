"""Seeded desk-scale worlds for tests and benchmarks.

Generated worlds guarantee that every valid state is connected to the
chosen start (unreachable free pockets are filled in; arm scenes are
re-rolled), so library planning can never fail for a reachable goal and
coverage plus query-success sweeps are meaningful.
"""

from __future__ import annotations

import math
import random
from collections import deque

from ..lattice import GoalRegionSpec, State
from .arm import Circle, PlanarArm
from .grid import GridWorld


def _flood_fill_free(
    dims, occupied: set[State], start: State, offsets
) -> set[State]:
    reached = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for off in offsets:
            nxt = tuple(c + d for c, d in zip(current, off))
            if nxt in reached or nxt in occupied:
                continue
            if any(not 0 <= c < n for c, n in zip(nxt, dims)):
                continue
            reached.add(nxt)
            queue.append(nxt)
    return reached


def random_grid(
    seed: int,
    *,
    dims: tuple[int, int] = (50, 50),
    density_range: tuple[float, float] = (0.15, 0.25),
    goal_lower: tuple[int, int] = (10, 10),
    goal_upper: tuple[int, int] = (39, 39),
    start: tuple[int, int] = (1, 1),
    connectivity: str = "8",
) -> tuple[GridWorld, State]:
    """Random obstacle field, normalized so all free space connects to start."""
    rng = random.Random(seed)
    density = rng.uniform(*density_range)
    occupied = {
        (x, y)
        for x in range(dims[0])
        for y in range(dims[1])
        if (x, y) != start and rng.random() < density
    }
    world_probe = GridWorld(
        dims=dims,
        occupied=(),
        goal_boxes=[GoalRegionSpec(goal_lower, goal_upper)],
        connectivity=connectivity,
    )
    reachable = _flood_fill_free(dims, occupied, start, world_probe.primitives)
    for x in range(dims[0]):
        for y in range(dims[1]):
            if (x, y) not in reachable:
                occupied.add((x, y))
    occupied.discard(start)
    world = GridWorld(
        dims=dims,
        occupied=occupied,
        goal_boxes=[GoalRegionSpec(goal_lower, goal_upper)],
        connectivity=connectivity,
    )
    return world, start


def corridor_grid(
    *,
    dims: tuple[int, int] = (40, 40),
    gap_y: int = 20,
    wall_x: int = 20,
    connectivity: str = "8",
) -> tuple[GridWorld, State]:
    """Goal region split by a full wall with a single one-cell gap.

    The narrow passage is what separates coverage-complete preprocessing
    from sampling baselines: the gap cell is the only crossing, so a
    roadmap must thread it to serve goals behind the wall.
    """
    occupied = {(wall_x, y) for y in range(dims[1]) if y != gap_y}
    world = GridWorld(
        dims=dims,
        occupied=occupied,
        goal_boxes=[GoalRegionSpec((6, 6), (dims[0] - 7, dims[1] - 7))],
        connectivity=connectivity,
    )
    return world, (2, 2)


def _mix(seed: int, salt: int) -> int:
    return (seed * 0x9E3779B1 + salt) & 0xFFFFFFFF


def random_arm_scene(
    seed: int,
    *,
    links: tuple[float, ...] = (0.55, 0.45, 0.35),
    deg_per_step: float = 15.0,
    limit: int = 5,
    goal_lower: tuple[int, ...] = (1, -3, -2),
    goal_upper: tuple[int, ...] = (3, 0, 1),
    n_obstacles: int = 3,
    start: tuple[int, ...] = (-3, 3, 1),
    max_attempts: int = 64,
) -> tuple[PlanarArm, State]:
    """Planar 3-link arm among random circles, re-rolled until plannable.

    Plannable means: the start pose is collision free, the goal box holds
    at least one valid state, and every valid goal state is reachable
    from the start through swept-valid lattice edges.
    """
    n = len(links)
    for attempt in range(max_attempts):
        rng = random.Random(_mix(seed, attempt))
        obstacles = []
        for _ in range(n_obstacles):
            radius = rng.uniform(0.08, 0.16)
            distance = rng.uniform(0.45, 0.95) * sum(links)
            angle = rng.uniform(-math.pi, math.pi)
            obstacles.append(
                Circle(
                    center=(
                        distance * math.cos(angle),
                        distance * math.sin(angle),
                    ),
                    radius=radius,
                )
            )
        arm = PlanarArm(
            link_lengths=links,
            base=(0.0, 0.0),
            deg_per_step=[deg_per_step] * n,
            limit_steps=[(-limit, limit)] * n,
            goal_boxes=[GoalRegionSpec(goal_lower, goal_upper)],
            obstacles=obstacles,
            connectivity="axis",
        )
        if not arm.is_valid(start):
            continue
        if _arm_plannable(arm, start):
            return arm, start
    raise RuntimeError(f"no plannable arm scene found for seed {seed}")


def _arm_plannable(arm: PlanarArm, start: State) -> bool:
    """Every valid goal state must be reachable via swept-valid edges."""
    valid_cache: dict[State, bool] = {}

    def valid(s: State) -> bool:
        if s not in valid_cache:
            valid_cache[s] = arm.is_valid(s)
        return valid_cache[s]

    goal_valid = [s for s in arm.goal_states() if valid(s)]
    if not goal_valid:
        return False
    reached = {start}
    queue = deque([start])
    targets = set(goal_valid)
    while queue and targets - reached:
        current = queue.popleft()
        for succ in arm.successors(current):
            if succ in reached or not valid(succ):
                continue
            if not arm.edge_valid(current, succ):
                continue
            reached.add(succ)
            queue.append(succ)
    return targets <= reached
