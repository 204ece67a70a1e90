"""Online phase: answer goal queries from a preprocessed artifact.

A query scans the radius-sorted subregions for one whose ball holds the
goal, walks greedy predecessors from the goal up to that subregion's
attractor, and splices the walk onto the attractor's library path. No
validity test runs anywhere on this path: correctness was paid for
offline, which is what makes the per-query work bounded by the subregion
count plus walk depth times branching factor.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import FingerprintMismatch, NotCovered, StepBudgetExceeded
from .lattice import LatticeDomain, State, greedy_predecessor
from .paths import PlannedPath, path_cost
from .preprocess import PreprocessArtifact


@dataclass
class QueryStats:
    """Per-query work counters; collision_checks must stay zero."""

    subregion_scans: int = 0
    greedy_expansions: int = 0
    predecessor_evaluations: int = 0
    collision_checks: int = 0
    wall_time: float = 0.0

    @property
    def operations(self) -> int:
        return self.subregion_scans + self.predecessor_evaluations


def find_covering_subregion(
    goal: State, artifact: PreprocessArtifact, domain: LatticeDomain
) -> int:
    """Index of the first (largest-radius) subregion whose ball holds goal.

    Raises :class:`NotCovered` when no ball does, which signals an
    invalid goal, a goal outside the region, or a mismatched artifact.
    """
    for index, sub in enumerate(artifact.subregions):
        if sub.covers(goal, domain):
            return index
    raise NotCovered(
        f"no subregion covers {goal}", scans=len(artifact.subregions)
    )


def _greedy_walk(
    attractor: State, goal: State, domain: LatticeDomain, max_steps: int
) -> tuple[list[State], int]:
    """Greedy-predecessor chain goal -> attractor, returned attractor-first."""
    states = [goal]
    evaluations = 0
    current = goal
    while current != attractor:
        if len(states) > max_steps:
            raise StepBudgetExceeded(
                f"greedy walk from {goal} exceeded {max_steps} steps; "
                "artifact and domain disagree"
            )
        evaluations += domain.branching_factor
        current = greedy_predecessor(current, attractor, domain)
        states.append(current)
    states.reverse()
    return states, evaluations


def find_greedy_path(
    attractor: State,
    goal: State,
    domain: LatticeDomain,
    max_steps: int | None = None,
) -> PlannedPath:
    """Collision-check-free walk from a covered goal to its attractor.

    The caller guarantees coverage; the walk performs no validity tests.
    ``max_steps`` hard-faults walks that do not converge (a mismatched
    artifact or tie-break rule), defaulting to the goal-region size.
    """
    cap = max_steps if max_steps is not None else domain.goal_size() + 1
    states, _ = _greedy_walk(attractor, goal, domain, cap)
    return PlannedPath(states=tuple(states), cost=path_cost(states, domain))


def compute_path(
    goal: State, artifact: PreprocessArtifact, domain: LatticeDomain
) -> tuple[PlannedPath, QueryStats]:
    """Full query: library path to the attractor plus the greedy tail.

    The duplicated attractor at the seam is dropped once. The returned
    stats record every unit of work done, including the (always zero)
    number of collision checks.
    """
    if artifact.domain_fingerprint != domain.fingerprint():
        raise FingerprintMismatch(
            "artifact was preprocessed for a different domain configuration"
        )
    goal = tuple(goal)
    began = time.perf_counter()
    checks_before = domain.counters.total

    index = find_covering_subregion(goal, artifact, domain)
    sub = artifact.subregions[index]
    walk, evaluations = _greedy_walk(
        sub.attractor, goal, domain, max_steps=sub.depth + 1
    )
    library_path = artifact.library.paths[sub.path_index]
    states = library_path.states + tuple(walk[1:])
    cost = library_path.cost + path_cost(walk, domain)

    stats = QueryStats(
        subregion_scans=index + 1,
        greedy_expansions=len(walk) - 1,
        predecessor_evaluations=evaluations,
        collision_checks=domain.counters.total - checks_before,
        wall_time=time.perf_counter() - began,
    )
    return PlannedPath(states=states, cost=cost), stats


@dataclass
class ProfileReport:
    """Empirical worst-case certificate over every valid goal state."""

    query_count: int
    max_wall_time: float
    max_ops: int
    argmax_goal: State | None
    operation_bound: int  # subregion count + deepest walk * branching
    within_bound: bool


def profile_worst_case(
    artifact: PreprocessArtifact, domain: LatticeDomain
) -> ProfileReport:
    """Query every valid goal state and record the worst observed work.

    Goal validity is established outside the timed query, so the
    per-query collision-check counters stay untouched.
    """
    depth_max = max((s.depth for s in artifact.subregions), default=0)
    bound = len(artifact.subregions) + depth_max * domain.branching_factor
    report = ProfileReport(
        query_count=0,
        max_wall_time=0.0,
        max_ops=0,
        argmax_goal=None,
        operation_bound=bound,
        within_bound=True,
    )
    for goal in domain.goal_states():
        if not domain.is_valid(goal):
            continue
        _, stats = compute_path(goal, artifact, domain)
        report.query_count += 1
        report.max_wall_time = max(report.max_wall_time, stats.wall_time)
        if stats.operations > report.max_ops:
            report.max_ops = stats.operations
            report.argmax_goal = goal
        if stats.operations > bound:
            report.within_bound = False
    return report
