"""Benchmark harness: coverage planner against multi-query baselines.

Every planner answers the same seeded query set. Baselines built from a
preprocessing budget are swept at multiples of the coverage planner's
own preprocessing time, so the comparison is budget-fair. Work is
reported in each planner's native unit: heuristic operations for the
coverage planner (it performs no collision checks online) and collision
checks for the sampling baselines (their connect phase is collision
bound).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .errors import NotCovered, PlanTimeout
from .lattice import LatticeDomain, State
from .persistence import artifact_bytes, roadmap_bytes
from .planners import AStarPlanner, prm_build, prm_query, rrt_connect_plan
from .preprocess import PreprocessArtifact, PreprocessConfig, preprocess_region
from .query import compute_path

CSV_HEADER = "planner,budget_s,mean_ms,p100_ms,success_pct,memory_bytes"


@dataclass
class QueryRecord:
    planner: str
    budget_s: float
    goal: State
    success: bool
    wall_ms: float
    ops: int


@dataclass
class BenchRow:
    planner: str
    budget_s: float
    mean_ms: float
    p100_ms: float
    success_pct: float
    memory_bytes: int
    preprocess_s: float


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    records: list[QueryRecord] = field(default_factory=list)
    # planner -> [(budget_s, success_pct)], the budget-sweep curves
    curves: dict[str, list[tuple[float, float]]] = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for row in self.rows:
            lines.append(
                f"{row.planner},{row.budget_s:.6f},{row.mean_ms:.6f},"
                f"{row.p100_ms:.6f},{row.success_pct:.2f},{row.memory_bytes}"
            )
        return "\n".join(lines) + "\n"


def sample_query_goals(
    domain: LatticeDomain, n: int, seed: int
) -> list[State]:
    """Uniform valid goal states; identical for every planner."""
    rng = random.Random(seed)
    boxes = domain.goal_boxes
    sizes = [b.size() for b in boxes]
    goals: list[State] = []
    attempts = 0
    while len(goals) < n and attempts < 200 * n:
        attempts += 1
        box = rng.choices(boxes, weights=sizes)[0]
        cand = tuple(rng.randint(lo, hi) for lo, hi in zip(box.lower, box.upper))
        if domain.is_valid(cand):
            goals.append(cand)
    if len(goals) < n:
        pool = [s for s in domain.goal_states() if domain.is_valid(s)]
        if not pool:
            raise ValueError("goal region has no valid states to query")
        while len(goals) < n:
            goals.append(rng.choice(pool))
    return goals


def _summarize(
    planner: str,
    budget_s: float,
    records: list[QueryRecord],
    memory_bytes: int,
    preprocess_s: float,
) -> BenchRow:
    times = [r.wall_ms for r in records]
    successes = sum(1 for r in records if r.success)
    return BenchRow(
        planner=planner,
        budget_s=budget_s,
        mean_ms=sum(times) / len(times),
        p100_ms=max(times),
        success_pct=100.0 * successes / len(records),
        memory_bytes=memory_bytes,
        preprocess_s=preprocess_s,
    )


def run_benchmark(
    domain: LatticeDomain,
    start: State,
    *,
    seed: int = 0,
    n_queries: int = 100,
    budget_multiples: tuple[float, ...] = (1.0, 2.0, 4.0),
    planners: tuple[str, ...] = ("coverage", "prm", "rrt-connect"),
    rrt_timeout: float = 0.5,
    prm_goal_bias: float = 0.0,
    preprocess_config: PreprocessConfig | None = None,
    artifact: PreprocessArtifact | None = None,
) -> BenchReport:
    """Run the shared query set through each configured planner.

    Pass an existing ``artifact`` to skip re-preprocessing. The coverage
    planner is always preprocessed (or reused) first because the baseline
    budgets are defined as multiples of its preprocessing time.
    """
    report = BenchReport()
    cfg = preprocess_config or PreprocessConfig(seed=seed)

    began = time.perf_counter()
    if artifact is None:
        artifact = preprocess_region(domain, start, AStarPlanner(), cfg)
    base_seconds = artifact.stats.preprocess_seconds or (
        time.perf_counter() - began
    )
    goals = sample_query_goals(domain, n_queries, seed)

    if "coverage" in planners:
        records = []
        compute_path(goals[0], artifact, domain)  # warm-up, untimed
        for goal in goals:
            try:
                _, stats = compute_path(goal, artifact, domain)
                records.append(
                    QueryRecord(
                        planner="coverage",
                        budget_s=base_seconds,
                        goal=goal,
                        success=True,
                        wall_ms=stats.wall_time * 1000.0,
                        ops=stats.operations,
                    )
                )
            except NotCovered:
                records.append(
                    QueryRecord(
                        planner="coverage",
                        budget_s=base_seconds,
                        goal=goal,
                        success=False,
                        wall_ms=0.0,
                        ops=0,
                    )
                )
        report.records.extend(records)
        report.rows.append(
            _summarize(
                "coverage",
                base_seconds,
                records,
                len(artifact_bytes(artifact)),
                base_seconds,
            )
        )
        report.curves["coverage"] = [(base_seconds, report.rows[-1].success_pct)]

    if "prm" in planners:
        report.curves["prm"] = []
        for multiple in budget_multiples:
            budget = multiple * base_seconds
            roadmap = prm_build(
                domain,
                start,
                seed=seed,
                seconds=budget,
                goal_bias=prm_goal_bias,
            )
            records = []
            for goal in goals:
                before = domain.counters.total
                t0 = time.perf_counter()
                path = prm_query(roadmap, start, goal, domain)
                wall_ms = (time.perf_counter() - t0) * 1000.0
                # Connect-phase cost: one heuristic evaluation per vertex
                # for the nearest-neighbor scan, plus all collision checks.
                ops = roadmap.vertex_count + domain.counters.total - before
                records.append(
                    QueryRecord(
                        planner="prm",
                        budget_s=budget,
                        goal=goal,
                        success=path is not None,
                        wall_ms=wall_ms,
                        ops=ops,
                    )
                )
            report.records.extend(records)
            row = _summarize(
                "prm",
                budget,
                records,
                len(roadmap_bytes(roadmap)),
                roadmap.build_seconds,
            )
            report.rows.append(row)
            report.curves["prm"].append((budget, row.success_pct))

    if "rrt-connect" in planners:
        records = []
        for goal in goals:
            before = domain.counters.total
            t0 = time.perf_counter()
            try:
                rrt_connect_plan(start, goal, domain, timeout=rrt_timeout, seed=seed)
                success = True
            except PlanTimeout:
                success = False
            wall_ms = (time.perf_counter() - t0) * 1000.0
            records.append(
                QueryRecord(
                    planner="rrt-connect",
                    budget_s=0.0,
                    goal=goal,
                    success=success,
                    wall_ms=wall_ms,
                    ops=domain.counters.total - before,
                )
            )
        report.records.extend(records)
        report.rows.append(_summarize("rrt-connect", 0.0, records, 0, 0.0))

    return report
