"""Offline path planners and multi-query baselines.

The library builder defaults to lattice A* (deterministic and optimal,
which also makes it the cost oracle for the suboptimality bound). A
seeded lattice RRT-Connect is available for parity with continuous-space
practice, and a PRM-lite roadmap provides the multi-query baseline the
benchmark harness compares against: it precomputes full paths from the
start to every roadmap vertex so a query only pays for the connect step.
"""

from __future__ import annotations

import heapq
import math
import random
import time
from dataclasses import dataclass
from heapq import heappop, heappush

from .errors import PlanTimeout
from .lattice import LatticeDomain, State
from .paths import PlannedPath, make_path

_TIMEOUT_CHECK_EVERY = 256


def _clock_guard(deadline: float | None, what: str) -> None:
    if deadline is not None and time.perf_counter() >= deadline:
        raise PlanTimeout(f"{what} exceeded its time budget")


# -- optimal search -------------------------------------------------------


def astar_plan(
    start: State,
    goal: State,
    domain: LatticeDomain,
    timeout: float | None = None,
) -> PlannedPath | None:
    """Optimal lattice path via A* with the domain heuristic.

    Edge costs equal the heuristic between neighbors, so the heuristic is
    consistent and the first pop of the goal is optimal. Returns ``None``
    when start and goal are provably disconnected; raises
    :class:`PlanTimeout` when the budget runs out first.
    """
    start, goal = tuple(start), tuple(goal)
    deadline = None if timeout is None else time.perf_counter() + timeout
    _clock_guard(deadline, "astar")
    if start == goal:
        return PlannedPath(states=(start,), cost=0.0)

    h = domain.heuristic
    g_cost: dict[State, float] = {start: 0.0}
    parent: dict[State, State] = {}
    closed: set[State] = set()
    open_heap: list[tuple[float, float, State]] = [(h(start, goal), 0.0, start)]
    pops = 0

    while open_heap:
        pops += 1
        if pops % _TIMEOUT_CHECK_EVERY == 0:
            _clock_guard(deadline, "astar")
        _, g_here, current = heappop(open_heap)
        if current in closed:
            continue
        closed.add(current)
        if current == goal:
            states = [current]
            while states[-1] != start:
                states.append(parent[states[-1]])
            states.reverse()
            return make_path(states, domain)
        for succ in domain.successors(current):
            if succ in closed:
                continue
            tentative = g_here + h(current, succ)
            if tentative >= g_cost.get(succ, math.inf):
                continue
            if not domain.edge_valid(current, succ):
                continue
            g_cost[succ] = tentative
            parent[succ] = current
            heappush(open_heap, (tentative + h(succ, goal), tentative, succ))
    return None


def dijkstra_costs(domain: LatticeDomain, source: State) -> dict[State, float]:
    """Exact shortest-path cost from ``source`` to every reachable state.

    Plain uniform relaxation with no heuristic; serves as the independent
    cost oracle against A* and query results.
    """
    source = tuple(source)
    dist: dict[State, float] = {source: 0.0}
    open_heap: list[tuple[float, State]] = [(0.0, source)]
    done: set[State] = set()
    h = domain.heuristic
    while open_heap:
        d, current = heappop(open_heap)
        if current in done:
            continue
        done.add(current)
        for succ in domain.successors(current):
            if succ in done or not domain.edge_valid(current, succ):
                continue
            nd = d + h(current, succ)
            if nd < dist.get(succ, math.inf):
                dist[succ] = nd
                heappush(open_heap, (nd, succ))
    return dist


# -- greedy straight-line local planner -----------------------------------


def _greedy_line(
    a: State, b: State, domain: LatticeDomain, max_steps: int | None = None
) -> tuple[bool, list[State]]:
    """Walk from a toward b, one strictly improving valid step at a time.

    Returns (reached_b, states walked including a). The local planner for
    roadmap connections and tree extension; it gives up at the first
    blocked or non-improving step.
    """
    h = domain.heuristic
    states = [a]
    current = a
    if max_steps is None:
        max_steps = 2 * sum(abs(x - y) for x, y in zip(a, b)) + 8
    while current != b and len(states) <= max_steps:
        best = None
        best_h = h(current, b)
        for succ in domain.successors(current):
            sh = h(succ, b)
            if sh < best_h or (best is not None and sh == best_h and succ < best):
                best, best_h = succ, sh
        if best is None or not domain.edge_valid(current, best):
            return False, states
        current = best
        states.append(current)
    return current == b, states


# -- RRT-Connect ------------------------------------------------------------


def _fold_seed(seed: int, state: State) -> int:
    z = seed & 0xFFFFFFFFFFFFFFFF
    for c in state:
        z = (z * 1000003 + (c & 0xFFFFFFFF)) & 0xFFFFFFFFFFFFFFFF
    return z


def _sample_state(rng: random.Random, bounds) -> State:
    return tuple(rng.randint(lo, hi) for lo, hi in bounds)


def _nearest(nodes: list[State], target: State, domain: LatticeDomain) -> State:
    h = domain.heuristic
    return min(nodes, key=lambda s: (h(s, target), s))


def rrt_connect_plan(
    start: State,
    goal: State,
    domain: LatticeDomain,
    timeout: float,
    seed: int = 0,
    extend_steps: int = 64,
) -> PlannedPath:
    """Bidirectional tree search over the lattice, seeded and reproducible.

    Both trees live on lattice vertices and grow along validated
    primitive edges, so results need no projection onto the lattice.
    Raises :class:`PlanTimeout` when the budget is gone (sampling cannot
    prove disconnection).
    """
    start, goal = tuple(start), tuple(goal)
    if start == goal:
        return PlannedPath(states=(start,), cost=0.0)
    deadline = time.perf_counter() + timeout
    _clock_guard(deadline, "rrt-connect")
    rng = random.Random(_fold_seed(seed, start + goal))
    bounds = domain.coordinate_bounds()

    parents_start: dict[State, State | None] = {start: None}
    parents_goal: dict[State, State | None] = {goal: None}
    nodes_start, nodes_goal = [start], [goal]

    def extend(parents: dict, nodes: list[State], target: State) -> State | None:
        """Grow the tree toward target; return the node reached closest."""
        near = _nearest(nodes, target, domain)
        _, walked = _greedy_line(near, target, domain, max_steps=extend_steps)
        added = None
        for prev, here in zip(walked, walked[1:]):
            if here not in parents:
                parents[here] = prev
                nodes.append(here)
            added = here
        return added if added is not None else (near if near == target else None)

    def chain(parents: dict, tip: State) -> list[State]:
        out = [tip]
        while parents[out[-1]] is not None:
            out.append(parents[out[-1]])
        out.reverse()
        return out

    trees = [
        (parents_start, nodes_start),
        (parents_goal, nodes_goal),
    ]
    side = 0
    while True:
        _clock_guard(deadline, "rrt-connect")
        sample = _sample_state(rng, bounds)
        parents_x, nodes_x = trees[side]
        parents_y, nodes_y = trees[1 - side]
        new_node = extend(parents_x, nodes_x, sample)
        if new_node is not None:
            extend(parents_y, nodes_y, new_node)
            if new_node in parents_y:
                from_start = chain(parents_start, new_node)
                from_goal = chain(parents_goal, new_node)
                states = from_start + from_goal[::-1][1:]
                return make_path(states, domain)
        side = 1 - side


# -- PRM-lite ---------------------------------------------------------------


def connection_degree(n: int, dimension: int) -> int:
    """Nearest-neighbor count for n roadmap vertices: e(1+1/d)ln(n)."""
    if n < 2:
        return 0
    k = math.ceil(math.e * (1.0 + 1.0 / dimension) * math.log(n))
    return min(max(k, 1), n - 1)


@dataclass
class Roadmap:
    """Multi-query roadmap with full start paths cached per vertex."""

    vertices: list[State]
    edges: dict[tuple[int, int], float]
    adjacency: dict[int, list[tuple[int, float]]]
    start: State
    start_costs: dict[int, float]
    start_paths: dict[int, tuple[State, ...]]
    k: int
    seed: int
    fingerprint: int
    build_seconds: float = 0.0
    sample_count: int = 0

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)


def prm_build(
    domain: LatticeDomain,
    start: State,
    *,
    seed: int = 0,
    n_vertices: int | None = None,
    seconds: float | None = None,
    goal_bias: float = 0.0,
) -> Roadmap:
    """Sample-and-connect roadmap rooted at the start state.

    Budget is either a vertex count (deterministic for a fixed seed) or a
    wall-clock allowance. ``goal_bias`` redirects that fraction of the
    samples into the goal region; it defaults to off. After connecting
    each vertex to its k nearest neighbors with validated lattice walks,
    shortest paths from the start are precomputed and stored in full, so
    queries pay only for the goal connection.
    """
    if n_vertices is None and seconds is None:
        raise ValueError("prm_build needs a vertex or wall-clock budget")
    began = time.perf_counter()
    deadline = None if seconds is None else began + seconds
    rng = random.Random(seed)
    bounds = domain.coordinate_bounds()
    boxes = domain.goal_boxes
    box_sizes = [b.size() for b in boxes]

    start = tuple(start)
    vertices: list[State] = []
    seen: set[State] = set()
    samples = 0
    rejections = 0
    attempt_cap = None if n_vertices is None else 1000 * max(n_vertices, 1)
    # In wall-clock mode, reserve most of the budget for edge connection.
    sample_deadline = None if seconds is None else began + 0.35 * seconds
    while True:
        if n_vertices is not None and len(vertices) >= n_vertices:
            break
        if sample_deadline is not None and time.perf_counter() >= sample_deadline:
            break
        if attempt_cap is not None and samples >= attempt_cap:
            break
        if rejections >= 2000:
            break  # space is saturated with vertices
        samples += 1
        if goal_bias > 0.0 and rng.random() < goal_bias:
            box = rng.choices(boxes, weights=box_sizes)[0]
            cand = tuple(
                rng.randint(lo, hi) for lo, hi in zip(box.lower, box.upper)
            )
        else:
            cand = _sample_state(rng, bounds)
        if cand in seen or not domain.is_valid(cand):
            rejections += 1
            continue
        rejections = 0
        seen.add(cand)
        vertices.append(cand)

    n = len(vertices)
    k = connection_degree(n, domain.dimension)
    h = domain.heuristic
    edges: dict[tuple[int, int], float] = {}
    adjacency: dict[int, list[tuple[int, float]]] = {i: [] for i in range(n)}
    edge_paths: dict[tuple[int, int], tuple[State, ...]] = {}

    for i, v in enumerate(vertices):
        if deadline is not None and i > 0 and time.perf_counter() >= deadline:
            break
        ranked = heapq.nsmallest(
            k,
            (j for j in range(n) if j != i),
            key=lambda j: (h(v, vertices[j]), vertices[j]),
        )
        for j in ranked:
            key = (min(i, j), max(i, j))
            if key in edges:
                continue
            reached, walked = _greedy_line(v, vertices[j], domain)
            if not reached:
                continue
            cost = sum(h(a, b) for a, b in zip(walked, walked[1:]))
            edges[key] = cost
            edge_paths[key] = tuple(walked if i < j else walked[::-1])
            adjacency[key[0]].append((key[1], cost))
            adjacency[key[1]].append((key[0], cost))

    # Attach the fixed start like a query endpoint, then push shortest
    # paths through the graph so every reachable vertex carries a full
    # lattice path from the start.
    start_costs: dict[int, float] = {}
    parent: dict[int, int | None] = {}
    entry_paths: dict[int, tuple[State, ...]] = {}
    heap: list[tuple[float, int]] = []
    for j in heapq.nsmallest(
        max(k, 1) if n else 0,
        range(n),
        key=lambda j: (h(start, vertices[j]), vertices[j]),
    ):
        reached, walked = _greedy_line(start, vertices[j], domain)
        if not reached:
            continue
        cost = sum(h(a, b) for a, b in zip(walked, walked[1:]))
        if cost < start_costs.get(j, math.inf):
            start_costs[j] = cost
            parent[j] = None
            entry_paths[j] = tuple(walked)
            heappush(heap, (cost, j))

    done: set[int] = set()
    while heap:
        d, i = heappop(heap)
        if i in done:
            continue
        done.add(i)
        for j, cost in adjacency[i]:
            nd = d + cost
            if nd < start_costs.get(j, math.inf):
                start_costs[j] = nd
                parent[j] = i
                heappush(heap, (nd, j))

    start_paths: dict[int, tuple[State, ...]] = {}

    def lattice_path_to(i: int) -> tuple[State, ...]:
        if i in start_paths:
            return start_paths[i]
        p = parent[i]
        if p is None:
            start_paths[i] = entry_paths[i]
            return start_paths[i]
        prefix = lattice_path_to(p)
        key = (min(p, i), max(p, i))
        hop = edge_paths[key] if p < i else edge_paths[key][::-1]
        full = prefix + tuple(hop[1:])
        start_paths[i] = full
        return full

    for i in sorted(done):
        lattice_path_to(i)

    return Roadmap(
        vertices=vertices,
        edges=edges,
        adjacency=adjacency,
        start=start,
        start_costs=start_costs,
        start_paths=start_paths,
        k=k,
        seed=seed,
        fingerprint=domain.fingerprint(),
        build_seconds=time.perf_counter() - began,
        sample_count=samples,
    )


def prm_query(
    roadmap: Roadmap, start: State, goal: State, domain: LatticeDomain
) -> PlannedPath | None:
    """Connect-only query: attach the goal to its k nearest vertices.

    Fails (returns ``None``) when no connection attempt lands on a vertex
    that the precomputed start paths reach. The connect attempts are the
    collision-checking cost the benchmark measures.
    """
    start, goal = tuple(start), tuple(goal)
    if start != roadmap.start:
        raise ValueError("roadmap was built for a different start state")
    h = domain.heuristic
    ranked = heapq.nsmallest(
        max(roadmap.k, 1),
        range(roadmap.vertex_count),
        key=lambda j: (h(goal, roadmap.vertices[j]), roadmap.vertices[j]),
    )
    best: tuple[float, tuple[State, ...]] | None = None
    for j in ranked:
        if j not in roadmap.start_costs:
            continue
        reached, walked = _greedy_line(goal, roadmap.vertices[j], domain)
        if not reached:
            continue
        connect_cost = sum(h(a, b) for a, b in zip(walked, walked[1:]))
        total = roadmap.start_costs[j] + connect_cost
        if best is None or total < best[0]:
            states = roadmap.start_paths[j] + tuple(walked[::-1][1:])
            best = (total, states)
    if best is None:
        return None
    return PlannedPath(states=best[1], cost=best[0])


# -- planner objects for the preprocessing loop ----------------------------


@dataclass
class AStarPlanner:
    """Default library builder: optimal, deterministic, no seed needed."""

    timeout: float | None = None

    def plan(self, domain, start, goal, timeout=None):
        budget = timeout if timeout is not None else self.timeout
        return astar_plan(start, goal, domain, timeout=budget)


@dataclass
class RRTConnectPlanner:
    """Sampling-based library builder; reproducible for a fixed seed."""

    seed: int = 0
    timeout: float | None = None
    extend_steps: int = 64

    def plan(self, domain, start, goal, timeout=None):
        budget = timeout if timeout is not None else self.timeout
        if budget is None:
            raise ValueError("rrt-connect needs a timeout")
        return rrt_connect_plan(
            start,
            goal,
            domain,
            timeout=budget,
            seed=self.seed,
            extend_steps=self.extend_steps,
        )
