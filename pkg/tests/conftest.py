import pytest

from goalcover.domains import GridWorld
from goalcover.lattice import GoalRegionSpec
from goalcover.planners import AStarPlanner
from goalcover.preprocess import PreprocessConfig, preprocess_region


def box_grid(dims, occupied=(), goal=None, connectivity="8", weights=None):
    goal = goal or (tuple(0 for _ in dims), tuple(d - 1 for d in dims))
    return GridWorld(
        dims=dims,
        occupied=occupied,
        goal_boxes=[GoalRegionSpec(*goal)],
        connectivity=connectivity,
        weights=weights,
    )


@pytest.fixture
def empty_box():
    """9x9 empty grid, the whole grid is the goal region."""
    return box_grid((9, 9))


@pytest.fixture
def walled_box():
    """20x20 grid split by a 6-cell wall inside the goal region."""
    wall = {(10, y) for y in range(6, 12)}
    return box_grid((20, 20), occupied=wall)


@pytest.fixture
def empty_box_artifact(empty_box):
    return preprocess_region(
        empty_box, (0, 0), AStarPlanner(), PreprocessConfig(seed=1)
    )


@pytest.fixture
def walled_box_artifact(walled_box):
    return preprocess_region(
        walled_box, (0, 0), AStarPlanner(), PreprocessConfig(seed=1)
    )


# -- independent oracles --------------------------------------------------


def brute_force_greedy_predecessor(state, target, domain, tie_eps=1e-12):
    """Exhaustive argmin over predecessors, reimplemented for tests."""
    candidates = []
    for pred in domain.predecessors(state):
        candidates.append((domain.heuristic(pred, target), pred))
    floor = min(h for h, _ in candidates)
    tied = [p for h, p in candidates if h <= floor + tie_eps]
    return sorted(tied)[0]


def oracle_reachable_set(attractor, domain, max_steps=None):
    """States whose simulated greedy chain reaches the attractor validly."""
    cap = max_steps if max_steps is not None else domain.goal_size() + 1
    reachable = set()
    for state in domain.goal_states():
        if not domain.is_valid(state):
            continue
        current, steps, chain = state, 0, [state]
        ok = True
        while current != attractor:
            if steps >= cap:
                ok = False
                break
            nxt = brute_force_greedy_predecessor(current, attractor, domain)
            if not domain.is_valid(nxt) or not domain.edge_valid(current, nxt):
                ok = False
                break
            current = nxt
            chain.append(nxt)
            steps += 1
        if ok:
            reachable.add(state)
    return reachable


def covered_union(subregions, domain):
    """Every goal state covered by at least one of the given balls."""
    return {
        s
        for s in domain.goal_states()
        if any(sub.covers(s, domain) for sub in subregions)
    }


def uncovered_valid_states(artifact, domain):
    return [
        s
        for s in domain.goal_states()
        if domain.is_valid(s)
        and not any(sub.covers(s, domain) for sub in artifact.subregions)
    ]
