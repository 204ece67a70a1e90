"""Discrete configuration-space lattice contract.

States are plain tuples of signed integers, one entry per lattice axis.
Tuples give us everything the planners rely on for free: hashability,
exact equality, and a stable lexicographic order that serves as the
tie-breaking rule everywhere a heuristic comparison ends in a draw.
The same tie-break rule must be in force when an artifact is built and
when it is queried, so it is fixed here once and never configurable.

A :class:`LatticeDomain` supplies the rest of the world model: motion
primitives (coordinate offsets, closed under negation so the graph is
undirected), validity tests backed by whatever collision geometry the
concrete domain owns, and a weighted Euclidean heuristic that is a true
metric (symmetric, zero only at identity, triangle inequality).
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    EmptyPredecessors,
    NotNeighbors,
)

State = tuple[int, ...]
Offset = tuple[int, ...]

# Two heuristic values closer than this are a tie; the lexicographic
# order of the states themselves then decides.
TIE_EPSILON = 1e-12

# Default cap on goal-region size (Assumption: the region is small enough
# to enumerate exhaustively).
DEFAULT_ENUMERATION_BUDGET = 1_000_000


def as_state(coords: Iterable[int]) -> State:
    return tuple(int(c) for c in coords)


@dataclass(frozen=True)
class GoalRegionSpec:
    """Inclusive axis-aligned box of lattice coordinates.

    ``lower[k] <= upper[k]`` on every axis; membership is a per-axis
    bound check. The box must fit the enumeration budget: the whole goal
    region is iterated exhaustively during preprocessing and audits.
    """

    lower: State
    upper: State

    def __post_init__(self):
        object.__setattr__(self, "lower", as_state(self.lower))
        object.__setattr__(self, "upper", as_state(self.upper))
        if len(self.lower) != len(self.upper):
            raise DimensionMismatch(
                f"goal box bounds disagree: {len(self.lower)} vs {len(self.upper)}"
            )
        for lo, hi in zip(self.lower, self.upper):
            if lo > hi:
                raise ValueError(f"goal box lower bound {lo} exceeds upper bound {hi}")

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def size(self) -> int:
        n = 1
        for lo, hi in zip(self.lower, self.upper):
            n *= hi - lo + 1
        return n

    def contains(self, state: State) -> bool:
        return all(lo <= c <= hi for lo, c, hi in zip(self.lower, state, self.upper))

    def states(self) -> Iterator[State]:
        ranges = [range(lo, hi + 1) for lo, hi in zip(self.lower, self.upper)]
        return (tuple(coords) for coords in itertools.product(*ranges))


def axis_primitives(dimension: int) -> tuple[Offset, ...]:
    """Unit steps along each axis (2n neighbors)."""
    offsets = []
    for k in range(dimension):
        for sign in (-1, 1):
            step = [0] * dimension
            step[k] = sign
            offsets.append(tuple(step))
    return tuple(sorted(offsets))


def full_primitives(dimension: int) -> tuple[Offset, ...]:
    """All nonzero offsets in {-1, 0, 1}^n (3^n - 1 neighbors)."""
    offsets = [
        o for o in itertools.product((-1, 0, 1), repeat=dimension) if any(o)
    ]
    return tuple(sorted(offsets))


@dataclass
class ValidityCounters:
    """Instrumentation for collision-check accounting.

    Every call into a domain's geometric validity test bumps
    ``state_checks``; every interpolated edge probe bumps ``edge_probes``.
    The query phase must leave both untouched.
    """

    state_checks: int = 0
    edge_probes: int = 0

    @property
    def total(self) -> int:
        return self.state_checks + self.edge_probes

    def reset(self) -> None:
        self.state_checks = 0
        self.edge_probes = 0


class LatticeDomain(ABC):
    """Behavioral contract every planner-facing world implements.

    Concrete domains are immutable after construction (the counters are
    instrumentation, not state) and safe for concurrent readers.
    """

    def __init__(
        self,
        dimension: int,
        primitives: Sequence[Offset],
        goal_boxes: Sequence[GoalRegionSpec],
        weights: Sequence[float] | None = None,
        resolution: Sequence[float] | None = None,
        enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    ):
        self.dimension = int(dimension)
        prims = tuple(sorted(tuple(int(x) for x in p) for p in primitives))
        if not prims:
            raise ValueError("domain needs at least one motion primitive")
        for p in prims:
            if len(p) != self.dimension:
                raise DimensionMismatch(f"primitive {p} has wrong arity")
            if not any(p):
                raise ValueError("zero offset is not a motion primitive")
            if tuple(-x for x in p) not in prims:
                raise ValueError(f"primitive set not closed under negation: {p}")
        self.primitives = prims
        self._primitive_set = frozenset(prims)
        self.goal_boxes = tuple(goal_boxes)
        if not self.goal_boxes:
            raise ValueError("domain needs a goal region")
        for box in self.goal_boxes:
            if box.dimension != self.dimension:
                raise DimensionMismatch("goal box dimension differs from domain")
        total = sum(box.size() for box in self.goal_boxes)
        if total > enumeration_budget:
            raise BudgetExceeded(
                f"goal region holds {total} states, budget {enumeration_budget}"
            )
        self.weights = tuple(float(w) for w in (weights or [1.0] * self.dimension))
        if len(self.weights) != self.dimension:
            raise DimensionMismatch("one weight per axis required")
        if any(w <= 0 for w in self.weights):
            raise ValueError("axis weights must be positive")
        # Physical units per lattice step; documentation only.
        self.resolution = tuple(
            float(r) for r in (resolution or [1.0] * self.dimension)
        )
        self.counters = ValidityCounters()

    @property
    def branching_factor(self) -> int:
        return len(self.primitives)

    def successors(self, state: State) -> list[State]:
        return [tuple(c + d for c, d in zip(state, p)) for p in self.primitives]

    def predecessors(self, state: State) -> list[State]:
        return [tuple(c - d for c, d in zip(state, p)) for p in self.primitives]

    def heuristic(self, a: State, b: State) -> float:
        return math.sqrt(
            math.fsum((w * (x - y)) ** 2 for w, x, y in zip(self.weights, a, b))
        )

    def in_goal(self, state: State) -> bool:
        return any(box.contains(state) for box in self.goal_boxes)

    def goal_states(self) -> Iterator[State]:
        """All goal-region states, deterministic order, no duplicates."""
        if len(self.goal_boxes) == 1:
            yield from self.goal_boxes[0].states()
            return
        seen: set[State] = set()
        for box in self.goal_boxes:
            for s in box.states():
                if s not in seen:
                    seen.add(s)
                    yield s

    def goal_size(self) -> int:
        if len(self.goal_boxes) == 1:
            return self.goal_boxes[0].size()
        return sum(1 for _ in self.goal_states())

    def is_valid(self, state: State) -> bool:
        """Collision/bounds test; counted."""
        if len(state) != self.dimension:
            raise DimensionMismatch(
                f"state {state} has {len(state)} coords, domain has {self.dimension}"
            )
        self.counters.state_checks += 1
        return self._valid(state)

    def edge_valid(self, a: State, b: State) -> bool:
        """Motion validity for one primitive step; counted via its probes."""
        diff = tuple(y - x for x, y in zip(a, b))
        if diff not in self._primitive_set:
            raise NotNeighbors(f"{a} -> {b} is not a primitive step")
        return self._edge_valid(a, b)

    @abstractmethod
    def _valid(self, state: State) -> bool: ...

    def _edge_valid(self, a: State, b: State) -> bool:
        return self.is_valid(a) and self.is_valid(b)

    @abstractmethod
    def coordinate_bounds(self) -> tuple[tuple[int, int], ...]:
        """Inclusive per-axis coordinate range containing every valid state."""

    # -- identity -----------------------------------------------------

    @abstractmethod
    def config_document(self) -> dict:
        """Canonical description of everything that defines this domain."""

    def fingerprint(self) -> int:
        """Stable 64-bit id of the configuration plus obstacle data."""
        blob = json.dumps(self.config_document(), sort_keys=True, separators=(",", ":"))
        digest = hashlib.blake2b(blob.encode(), digest_size=8).digest()
        return int.from_bytes(digest, "big")


def greedy_predecessor(state: State, target: State, domain: LatticeDomain) -> State:
    """The predecessor of ``state`` nearest ``target`` under the heuristic.

    Ties within ``TIE_EPSILON`` go to the lexicographically smallest
    state, which makes the result unique and reproducible across runs.
    Candidates are *all* lattice predecessors; validity plays no part in
    the selection.
    """
    preds = domain.predecessors(state)
    if not preds:
        raise EmptyPredecessors(f"state {state} has no predecessors")
    h = domain.heuristic
    scored = [(h(p, target), p) for p in preds]
    best_h = min(hp for hp, _ in scored)
    return min(p for hp, p in scored if hp <= best_h + TIE_EPSILON)


# -- assumption checkers ----------------------------------------------
#
# Advisory diagnostics, quadratic in the goal-region size. They verify the
# two structural properties the preprocessing guarantees rest on:
#
#  * weak monotonicity - from any goal-region state some predecessor is
#    at least as close (by h) to any other goal-region state, and
#  * goal convexity - that closest predecessor stays inside the goal
#    region, so greedy descent never leaves it.


@dataclass
class CheckReport:
    """Outcome of an exhaustive or sampled pair check."""

    name: str
    violations: list[tuple[State, State]] = field(default_factory=list)
    mode: str = "exhaustive"
    pairs_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


DEFAULT_PAIR_BUDGET = 250_000
DEFAULT_SAMPLE_SIZE = 20_000


def _pair_stream(
    domain: LatticeDomain,
    pair_budget: int,
    sample_size: int,
    seed: int,
) -> tuple[str, Iterator[tuple[State, State]]]:
    states = list(domain.goal_states())
    n = len(states)
    if n < 2 or n * (n - 1) <= pair_budget:
        return "exhaustive", (
            (s1, s2) for s1 in states for s2 in states if s1 != s2
        )
    rng = random.Random(seed)

    def sampled() -> Iterator[tuple[State, State]]:
        for _ in range(sample_size):
            s1 = rng.choice(states)
            s2 = rng.choice(states)
            while s2 == s1:
                s2 = rng.choice(states)
            yield s1, s2

    return "sampled", sampled()


def check_weak_monotonicity(
    domain: LatticeDomain,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    sample_size: int = DEFAULT_SAMPLE_SIZE,
    seed: int = 0,
    max_violations: int = 100,
) -> CheckReport:
    """Report goal pairs whose best predecessor moves away from the target.

    Falls back to uniformly sampled pairs (report mode ``"sampled"``)
    when the full quadratic sweep would exceed ``pair_budget``.
    """
    mode, pairs = _pair_stream(domain, pair_budget, sample_size, seed)
    report = CheckReport(name="weak_monotonicity", mode=mode)
    h = domain.heuristic
    for s1, s2 in pairs:
        report.pairs_checked += 1
        best = min(h(p, s2) for p in domain.predecessors(s1))
        if best > h(s1, s2):
            report.violations.append((s1, s2))
            if len(report.violations) >= max_violations:
                break
    return report


def check_goal_convexity(
    domain: LatticeDomain,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    sample_size: int = DEFAULT_SAMPLE_SIZE,
    seed: int = 0,
    max_violations: int = 100,
) -> CheckReport:
    """Report goal pairs whose greedy predecessor exits the goal region."""
    mode, pairs = _pair_stream(domain, pair_budget, sample_size, seed)
    report = CheckReport(name="goal_convexity", mode=mode)
    for s1, s2 in pairs:
        report.pairs_checked += 1
        if not domain.in_goal(greedy_predecessor(s1, s2, domain)):
            report.violations.append((s1, s2))
            if len(report.violations) >= max_violations:
                break
    return report
