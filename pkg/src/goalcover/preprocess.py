"""Offline phase: decompose the goal region into attractor-centered balls.

The covering loop repeatedly picks an uncovered valid goal state, makes
it an attractor, plans a path to it from the fixed start, and grows the
largest heuristic ball around it whose valid states all reach the
attractor by greedy descent. Ball boundaries feed a frontier that drives
the loop until every valid goal state is covered; invalid frontier
states seed escape searches that hop across obstacle blobs so
disconnected pockets of the goal region are found too.

The product is a :class:`PreprocessArtifact`: sorted subregions, the
invalid bookkeeping balls, and a library with one start-to-attractor
path per subregion.
"""

from __future__ import annotations

import logging
import random
import time
import warnings
from dataclasses import dataclass, field, replace
from heapq import heappop, heappush
from typing import NamedTuple, Protocol

from .errors import InvalidAttractor, PlannerFailure, PlanTimeout, StartInvalid
from .lattice import (
    LatticeDomain,
    State,
    check_goal_convexity,
    check_weak_monotonicity,
    greedy_predecessor,
)
from .paths import PlannedPath

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-6
DEFAULT_TIMEOUT_SCHEDULE = (10.0, 60.0)


class OfflinePlanner(Protocol):
    """Start-to-attractor path planner used while building the library.

    Implementations return ``None`` when they prove no path exists and
    raise :class:`PlanTimeout` when the wall-clock budget runs out.
    Identical (domain, start, goal, seed) must give identical output.
    """

    def plan(
        self,
        domain: LatticeDomain,
        start: State,
        goal: State,
        timeout: float | None = None,
    ) -> PlannedPath | None: ...


@dataclass(frozen=True)
class Subregion:
    """Heuristic ball whose valid states all greedy-walk to the attractor.

    ``covers`` is strict: a state sitting exactly on the radius is outside.
    ``depth`` bounds the greedy-walk step count from any covered state.
    """

    attractor: State
    radius: float
    depth: int
    path_index: int

    def covers(self, state: State, domain: LatticeDomain) -> bool:
        return domain.heuristic(state, self.attractor) < self.radius


@dataclass(frozen=True)
class InvalidSubregion:
    """Ball around an in-collision state, marking it as already examined."""

    center: State
    radius: float

    def covers(self, state: State, domain: LatticeDomain) -> bool:
        return domain.heuristic(state, self.center) < self.radius


@dataclass(frozen=True)
class PathLibrary:
    """One collision-free start-to-attractor path per subregion."""

    paths: tuple[PlannedPath, ...]

    def __len__(self) -> int:
        return len(self.paths)


@dataclass
class FrontierSets:
    """Working sets of the covering loop: valid and invalid boundary states.

    Duplicates are allowed; the pop-time covered check discards them.
    All members lie in the goal region.
    """

    valid: list[State] = field(default_factory=list)
    invalid: list[State] = field(default_factory=list)

    def push(self, state: State, domain: LatticeDomain) -> None:
        (self.valid if domain.is_valid(state) else self.invalid).append(state)


@dataclass
class PreprocessStats:
    seed: int
    epsilon: float
    timeout_schedule: tuple[float, ...]
    tiers_used: int = 1
    subregion_count: int = 0
    invalid_subregion_count: int = 0
    pruned_count: int = 0
    planner_timeouts: int = 0
    retried_attractors: int = 0
    incomplete: bool = False
    orphan_attractors: tuple[State, ...] = ()
    # Wall clock; informational only and never serialized, so artifacts
    # built from the same seed stay byte-identical.
    preprocess_seconds: float = 0.0


@dataclass(frozen=True)
class PreprocessArtifact:
    subregions: tuple[Subregion, ...]
    invalid_subregions: tuple[InvalidSubregion, ...]
    library: PathLibrary
    start: State
    domain_fingerprint: int
    stats: PreprocessStats


@dataclass
class PreprocessConfig:
    seed: int = 0
    epsilon: float = DEFAULT_EPSILON
    timeout_schedule: tuple[float, ...] = DEFAULT_TIMEOUT_SCHEDULE
    depth_cap: int | None = None
    sample_attempts: int = 64
    # Sampled sanity check of the heuristic assumptions before the loop
    # runs; 0 disables it.
    assumption_check_pairs: int = 200
    # Diagnostics only: keep provably contained subregions in the artifact.
    prune: bool = True


def covered_by(state: State, subregions, domain: LatticeDomain) -> bool:
    return any(r.covers(state, domain) for r in subregions)


# -- reachability search -------------------------------------------------


@dataclass
class ReachabilityTrace:
    """Full record of one ball-growing search, for audits and reruns."""

    attractor: State
    radius: float
    reachable: dict[State, int]  # kept state -> greedy depth, attractor included
    frontier: list[State]
    terminator: State | None
    trimmed: tuple[State, ...]
    pop_keys: list[float]
    depth: int

    @property
    def reachable_size(self) -> int:
        return len(self.reachable)


class ReachabilityResult(NamedTuple):
    frontier: list[State]
    radius: float
    depth: int
    reachable_size: int


def trace_reachability(
    attractor: State,
    domain: LatticeDomain,
    *,
    epsilon: float = DEFAULT_EPSILON,
    depth_cap: int | None = None,
) -> ReachabilityTrace:
    """Grow the attractor's ball by best-first expansion on the heuristic.

    A popped state joins the reachable set when its greedy predecessor is
    already reachable and the connecting edge is collision-free. Invalid
    pops never terminate the search; they keep expanding so the ball can
    wrap around obstacles. The first valid pop whose greedy chain is
    broken fixes the radius at its heuristic value (an exhausted queue
    fixes it just past the farthest pop instead).

    Coverage is strict-inside, so reachable states sitting exactly on the
    final radius are trimmed out of the ball and handed back on the
    frontier along with the terminating state and the unexpanded queue;
    the covering loop will cover them with later subregions. This keeps
    the recorded ball exactly equal to its reachable set.
    """
    if not domain.in_goal(attractor):
        raise InvalidAttractor(f"attractor {attractor} outside goal region")
    if not domain.is_valid(attractor):
        raise InvalidAttractor(f"attractor {attractor} is in collision")

    h = domain.heuristic
    reachable: dict[State, int] = {attractor: 0}
    keys: dict[State, float] = {attractor: 0.0}
    # The attractor starts closed: its successors seed the queue, and a
    # re-pop at key zero would otherwise end the search with an empty ball.
    closed: set[State] = {attractor}
    open_heap: list[tuple[float, State]] = []
    for s in domain.successors(attractor):
        if domain.in_goal(s):
            heappush(open_heap, (h(s, attractor), s))

    pop_keys: list[float] = []
    last_key = 0.0
    radius: float | None = None
    terminator: State | None = None

    while open_heap:
        key, s = heappop(open_heap)
        if s in closed:
            continue
        closed.add(s)
        pop_keys.append(key)
        last_key = key

        pred = greedy_predecessor(s, attractor, domain)
        if pred in reachable and domain.edge_valid(s, pred):
            depth_here = reachable[pred] + 1
            if depth_cap is not None and depth_here > depth_cap:
                radius = key
                terminator = s
                break
            reachable[s] = depth_here
            keys[s] = key
        elif domain.is_valid(s):
            radius = key
            terminator = s
            break

        for succ in domain.successors(s):
            if succ not in closed and domain.in_goal(succ):
                heappush(open_heap, (h(succ, attractor), succ))

    if radius is None:
        radius = last_key + epsilon

    trimmed = tuple(s for s, k in keys.items() if s != attractor and k >= radius)
    for s in trimmed:
        del reachable[s]

    frontier: list[State] = []
    seen: set[State] = set()
    while open_heap:
        _, s = heappop(open_heap)
        if s not in closed and s not in seen:
            seen.add(s)
            frontier.append(s)
    if terminator is not None:
        frontier.append(terminator)
    frontier.extend(trimmed)

    depth = max(reachable.values())
    return ReachabilityTrace(
        attractor=attractor,
        radius=radius,
        reachable=reachable,
        frontier=frontier,
        terminator=terminator,
        trimmed=trimmed,
        pop_keys=pop_keys,
        depth=depth,
    )


def compute_reachability(
    attractor: State,
    domain: LatticeDomain,
    *,
    epsilon: float = DEFAULT_EPSILON,
    depth_cap: int | None = None,
) -> ReachabilityResult:
    """Ball-growing search: (frontier, radius, depth, reachable_size)."""
    trace = trace_reachability(
        attractor, domain, epsilon=epsilon, depth_cap=depth_cap
    )
    return ReachabilityResult(
        frontier=trace.frontier,
        radius=trace.radius,
        depth=trace.depth,
        reachable_size=trace.reachable_size,
    )


def find_valid_uncovered_state(
    center: State,
    subregions,
    domain: LatticeDomain,
    *,
    epsilon: float = DEFAULT_EPSILON,
) -> tuple[State | None, float]:
    """Escape search from an in-collision goal state.

    Best-first on the heuristic distance to ``center`` over successors
    and predecessors inside the goal region, with a fresh closed set.
    Returns the first valid state not covered by any subregion, plus the
    ball radius around ``center`` that the search cleared.
    """
    h = domain.heuristic
    open_heap: list[tuple[float, State]] = [(0.0, center)]
    closed: set[State] = set()
    last_key = 0.0
    while open_heap:
        key, s = heappop(open_heap)
        if s in closed:
            continue
        closed.add(s)
        last_key = key
        if not covered_by(s, subregions, domain) and domain.is_valid(s):
            return s, key
        for nxt in domain.successors(s) + domain.predecessors(s):
            if nxt not in closed and domain.in_goal(nxt):
                heappush(open_heap, (h(nxt, center), nxt))
    return None, last_key + epsilon


# -- pruning ---------------------------------------------------------------


def prune_redundant(subregions, domain: LatticeDomain) -> list[Subregion]:
    """Drop every ball provably contained in a kept one.

    Containment certificate via the triangle inequality:
    ``h(a_j, a_i) + r_j <= r_i`` means ball j lies inside ball i, so
    removing j cannot uncover any state. Processing in radius-descending
    order keeps the larger of two mutually contained balls.
    """
    h = domain.heuristic
    ordered = sorted(subregions, key=lambda r: (-r.radius, r.attractor))
    kept: list[Subregion] = []
    for cand in ordered:
        contained = any(
            h(cand.attractor, k.attractor) + cand.radius <= k.radius for k in kept
        )
        if not contained:
            kept.append(cand)
    return kept


# -- covering loop ----------------------------------------------------------


def sample_valid_state(
    domain: LatticeDomain, rng: random.Random, attempts: int = 64
) -> State | None:
    """Uniform rejection sample of a valid goal state.

    Falls back to a deterministic lexicographic scan when sampling keeps
    hitting collisions, so a fully blocked goal region is detected rather
    than looped on.
    """
    boxes = domain.goal_boxes
    sizes = [box.size() for box in boxes]
    for _ in range(attempts):
        box = rng.choices(boxes, weights=sizes)[0]
        state = tuple(
            rng.randint(lo, hi) for lo, hi in zip(box.lower, box.upper)
        )
        if domain.is_valid(state):
            return state
    for state in domain.goal_states():
        if domain.is_valid(state):
            return state
    return None


def _empty_artifact(
    domain: LatticeDomain, start: State, stats: PreprocessStats
) -> PreprocessArtifact:
    return PreprocessArtifact(
        subregions=(),
        invalid_subregions=(),
        library=PathLibrary(paths=()),
        start=start,
        domain_fingerprint=domain.fingerprint(),
        stats=stats,
    )


def preprocess_region(
    domain: LatticeDomain,
    start: State,
    planner: OfflinePlanner,
    config: PreprocessConfig | None = None,
) -> PreprocessArtifact:
    """Cover every valid goal state with attractor balls plus paths.

    Attractors whose path planning times out are set aside and retried
    with the next, larger timeout tier once the loop drains; attractors
    the planner proves disconnected become orphans. Any orphan left after
    the last tier raises :class:`PlannerFailure` carrying the artifact
    marked incomplete.

    Post passes: radius-descending sort, containment pruning, and library
    reindexing so ``path_index`` survives both.
    """
    cfg = config or PreprocessConfig()
    start = tuple(start)
    if not domain.is_valid(start):
        raise StartInvalid(f"start state {start} is in collision")

    if cfg.assumption_check_pairs > 0:
        for check in (check_weak_monotonicity, check_goal_convexity):
            report = check(
                domain,
                pair_budget=0,
                sample_size=cfg.assumption_check_pairs,
                seed=cfg.seed ^ 0x5EED,
            )
            if not report.ok:
                warnings.warn(
                    f"heuristic assumption check {report.name} found "
                    f"{len(report.violations)} violating pairs; coverage "
                    "guarantees may not hold on this domain",
                    stacklevel=2,
                )

    began = time.perf_counter()
    stats = PreprocessStats(
        seed=cfg.seed, epsilon=cfg.epsilon, timeout_schedule=cfg.timeout_schedule
    )
    rng = random.Random(cfg.seed)
    seed_state = sample_valid_state(domain, rng, cfg.sample_attempts)
    if seed_state is None:
        warnings.warn("goal region has no valid states; artifact is empty")
        stats.preprocess_seconds = time.perf_counter() - began
        return _empty_artifact(domain, start, stats)

    subregions: list[Subregion] = []
    invalid_subregions: list[InvalidSubregion] = []
    library_paths: list[PlannedPath] = []
    bad_attractors: list[State] = []
    orphans: dict[State, None] = {}

    def run_cover_loop(frontier: FrontierSets, timeout: float) -> None:
        while frontier.valid or frontier.invalid:
            while frontier.valid:
                s = frontier.valid.pop()
                if covered_by(s, subregions, domain) or s in orphans:
                    continue
                plan_began = time.perf_counter()
                try:
                    path = planner.plan(domain, start, s, timeout=timeout)
                except PlanTimeout:
                    stats.planner_timeouts += 1
                    bad_attractors.append(s)
                    continue
                plan_seconds = time.perf_counter() - plan_began
                if path is None:
                    # Provably no path from the start: record the orphan
                    # but still harvest its frontier so exploration does
                    # not stall at an unreachable pocket.
                    orphans.setdefault(s)
                    trace = trace_reachability(
                        s, domain, epsilon=cfg.epsilon, depth_cap=cfg.depth_cap
                    )
                    for f in trace.frontier:
                        frontier.push(f, domain)
                    continue
                trace = trace_reachability(
                    s, domain, epsilon=cfg.epsilon, depth_cap=cfg.depth_cap
                )
                library_paths.append(path)
                sub = Subregion(
                    attractor=s,
                    radius=trace.radius,
                    depth=trace.depth,
                    path_index=len(library_paths) - 1,
                )
                subregions.append(sub)
                logger.info(
                    "subregion i=%d attractor=%s radius=%.9g depth=%d "
                    "reachable=%d plan_s=%.3f",
                    len(subregions) - 1,
                    ",".join(str(c) for c in s),
                    trace.radius,
                    trace.depth,
                    trace.reachable_size,
                    plan_seconds,
                )
                for f in trace.frontier:
                    frontier.push(f, domain)
            while frontier.invalid:
                s = frontier.invalid.pop()
                if covered_by(s, subregions, domain) or covered_by(
                    s, invalid_subregions, domain
                ):
                    continue
                found, radius = find_valid_uncovered_state(
                    s, subregions, domain, epsilon=cfg.epsilon
                )
                invalid_subregions.append(InvalidSubregion(center=s, radius=radius))
                if found is not None:
                    frontier.valid.append(found)
                    break

    for tier_index, timeout in enumerate(cfg.timeout_schedule):
        if tier_index == 0:
            frontier = FrontierSets(valid=[seed_state])
        else:
            retry = [s for s in bad_attractors if not covered_by(s, subregions, domain)]
            bad_attractors.clear()
            if not retry:
                break
            stats.retried_attractors += len(retry)
            frontier = FrontierSets(valid=retry)
        stats.tiers_used = tier_index + 1
        run_cover_loop(frontier, timeout)
        if not bad_attractors:
            break

    for s in bad_attractors:
        orphans.setdefault(s)
    final_orphans = tuple(
        s for s in orphans if not covered_by(s, subregions, domain)
    )

    if cfg.prune:
        kept = prune_redundant(subregions, domain)
    else:
        kept = sorted(subregions, key=lambda r: (-r.radius, r.attractor))
    stats.pruned_count = len(subregions) - len(kept)
    reindexed = []
    final_paths = []
    for sub in kept:
        final_paths.append(library_paths[sub.path_index])
        reindexed.append(replace(sub, path_index=len(final_paths) - 1))

    stats.subregion_count = len(reindexed)
    stats.invalid_subregion_count = len(invalid_subregions)
    stats.incomplete = bool(final_orphans)
    stats.orphan_attractors = final_orphans
    stats.preprocess_seconds = time.perf_counter() - began

    artifact = PreprocessArtifact(
        subregions=tuple(reindexed),
        invalid_subregions=tuple(invalid_subregions),
        library=PathLibrary(paths=tuple(final_paths)),
        start=start,
        domain_fingerprint=domain.fingerprint(),
        stats=stats,
    )
    if final_orphans:
        raise PlannerFailure(
            f"{len(final_orphans)} attractors have no path from the start",
            orphans=final_orphans,
            artifact=artifact,
        )
    return artifact
