"""FastAPI service holding domains and artifacts for repeated queries.

The natural deployment of this planner is a long-running process: load a
domain, preprocess once (or load a saved artifact), then serve many goal
queries with bounded work per request. Registries are in-memory and
process-local; artifacts can be persisted through the save/load
endpoints.

Run with ``uvicorn goalcover.service.app:app``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..bench import run_benchmark
from ..domains import load_arm_scene, load_gridmap
from ..errors import (
    ChecksumMismatch,
    DimensionMismatch,
    FingerprintMismatch,
    GoalcoverError,
    InconsistentDims,
    NotCovered,
    ParseError,
    VersionUnsupported,
)
from ..lattice import LatticeDomain, check_goal_convexity, check_weak_monotonicity
from ..persistence import load_artifact, save_artifact
from ..planners import AStarPlanner, RRTConnectPlanner
from ..preprocess import PreprocessArtifact, PreprocessConfig, preprocess_region
from ..query import compute_path, profile_worst_case
from . import schemas


@dataclass
class ServiceState:
    domains: dict[str, LatticeDomain] = field(default_factory=dict)
    artifacts: dict[str, tuple[PreprocessArtifact, str]] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)
    counters: dict[str, int] = field(default_factory=dict)

    def next_id(self, prefix: str) -> str:
        with self.lock:
            self.counters[prefix] = self.counters.get(prefix, 0) + 1
            return f"{prefix}{self.counters[prefix]:04d}"


class UnknownId(GoalcoverError):
    pass


_STATUS = {
    ParseError: 422,
    InconsistentDims: 422,
    DimensionMismatch: 422,
    UnknownId: 404,
    NotCovered: 404,
    FingerprintMismatch: 409,
    ChecksumMismatch: 409,
    VersionUnsupported: 409,
}


def _domain_info(domain_id: str, domain: LatticeDomain) -> schemas.DomainInfo:
    return schemas.DomainInfo(
        domain_id=domain_id,
        kind=domain.config_document()["type"],
        dimension=domain.dimension,
        fingerprint=f"{domain.fingerprint():016x}",
        goal_states=domain.goal_size(),
        branching_factor=domain.branching_factor,
    )


def _artifact_info(
    artifact_id: str, artifact: PreprocessArtifact, domain_id: str
) -> schemas.ArtifactInfo:
    return schemas.ArtifactInfo(
        artifact_id=artifact_id,
        domain_id=domain_id,
        subregions=len(artifact.subregions),
        invalid_subregions=len(artifact.invalid_subregions),
        start=list(artifact.start),
        incomplete=artifact.stats.incomplete,
    )


def create_app() -> FastAPI:
    state = ServiceState()
    app = FastAPI(title="goalcover", version=__version__)

    @app.exception_handler(GoalcoverError)
    async def _goalcover_error(request: Request, exc: GoalcoverError):
        status = 400
        for klass, code in _STATUS.items():
            if isinstance(exc, klass):
                status = code
                break
        return JSONResponse(
            status_code=status,
            content=schemas.ErrorBody(
                error=exc.category, detail=str(exc)
            ).model_dump(),
        )

    def get_domain(domain_id: str) -> LatticeDomain:
        try:
            return state.domains[domain_id]
        except KeyError:
            raise UnknownId(f"unknown domain {domain_id!r}")

    def get_artifact(artifact_id: str) -> tuple[PreprocessArtifact, str]:
        try:
            return state.artifacts[artifact_id]
        except KeyError:
            raise UnknownId(f"unknown artifact {artifact_id!r}")

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(
            status="ok",
            version=__version__,
            domains=len(state.domains),
            artifacts=len(state.artifacts),
        )

    @app.post("/domains", response_model=schemas.DomainInfo)
    def load_domain(body: schemas.LoadDomainRequest):
        if (body.map_text is None) == (body.scene is None):
            raise ParseError("provide exactly one of map_text or scene")
        if body.map_text is not None:
            domain = load_gridmap(body.map_text)
        else:
            domain = load_arm_scene(body.scene)
        domain_id = state.next_id("d")
        state.domains[domain_id] = domain
        return _domain_info(domain_id, domain)

    @app.get("/domains/{domain_id}", response_model=schemas.DomainInfo)
    def domain_info(domain_id: str):
        return _domain_info(domain_id, get_domain(domain_id))

    @app.post("/domains/{domain_id}/validate", response_model=schemas.ValidateResponse)
    def validate_domain(domain_id: str, body: schemas.ValidateRequest):
        domain = get_domain(domain_id)
        reports = [
            check(
                domain,
                pair_budget=body.pair_budget,
                sample_size=body.sample_size,
                seed=body.seed,
            )
            for check in (check_weak_monotonicity, check_goal_convexity)
        ]
        return schemas.ValidateResponse(
            ok=all(r.ok for r in reports),
            checks=[
                schemas.CheckReportBody(
                    name=r.name,
                    mode=r.mode,
                    pairs_checked=r.pairs_checked,
                    violation_count=len(r.violations),
                    violations=[
                        [list(a), list(b)] for a, b in r.violations[:20]
                    ],
                )
                for r in reports
            ],
        )

    @app.post(
        "/domains/{domain_id}/preprocess", response_model=schemas.PreprocessResponse
    )
    def preprocess(domain_id: str, body: schemas.PreprocessRequest):
        domain = get_domain(domain_id)
        config = PreprocessConfig(
            seed=body.seed,
            epsilon=body.epsilon,
            timeout_schedule=tuple(body.timeout_schedule),
            depth_cap=body.depth_cap,
        )
        if body.planner == "astar":
            planner = AStarPlanner()
        elif body.planner == "rrt-connect":
            planner = RRTConnectPlanner(seed=body.seed)
        else:
            raise ParseError(f"unknown planner {body.planner!r}")
        artifact = preprocess_region(domain, tuple(body.start), planner, config)
        artifact_id = state.next_id("a")
        state.artifacts[artifact_id] = (artifact, domain_id)
        stats = artifact.stats
        return schemas.PreprocessResponse(
            artifact_id=artifact_id,
            domain_id=domain_id,
            stats=schemas.PreprocessStatsBody(
                seed=stats.seed,
                epsilon=stats.epsilon,
                timeout_schedule=list(stats.timeout_schedule),
                tiers_used=stats.tiers_used,
                subregion_count=stats.subregion_count,
                invalid_subregion_count=stats.invalid_subregion_count,
                pruned_count=stats.pruned_count,
                planner_timeouts=stats.planner_timeouts,
                retried_attractors=stats.retried_attractors,
                incomplete=stats.incomplete,
                preprocess_seconds=stats.preprocess_seconds,
            ),
        )

    @app.get("/artifacts/{artifact_id}", response_model=schemas.ArtifactInfo)
    def artifact_info(artifact_id: str):
        artifact, domain_id = get_artifact(artifact_id)
        return _artifact_info(artifact_id, artifact, domain_id)

    @app.post("/artifacts/{artifact_id}/query", response_model=schemas.QueryResponse)
    def query(artifact_id: str, body: schemas.QueryRequest):
        artifact, domain_id = get_artifact(artifact_id)
        domain = get_domain(domain_id)
        goal = tuple(body.goal)
        if len(goal) != domain.dimension:
            raise NotCovered(f"goal {goal} has wrong dimension")
        if not domain.in_goal(goal):
            raise NotCovered(f"goal {goal} is outside the goal region")
        path, stats = compute_path(goal, artifact, domain)
        return schemas.QueryResponse(
            path=[list(s) for s in path.states],
            cost=path.cost,
            stats=schemas.QueryStatsBody(
                subregion_scans=stats.subregion_scans,
                greedy_expansions=stats.greedy_expansions,
                predecessor_evaluations=stats.predecessor_evaluations,
                collision_checks=stats.collision_checks,
                wall_seconds=stats.wall_time,
            ),
        )

    @app.post("/artifacts/{artifact_id}/profile", response_model=schemas.ProfileResponse)
    def profile(artifact_id: str):
        artifact, domain_id = get_artifact(artifact_id)
        domain = get_domain(domain_id)
        report = profile_worst_case(artifact, domain)
        return schemas.ProfileResponse(
            queries=report.query_count,
            max_wall_seconds=report.max_wall_time,
            max_ops=report.max_ops,
            argmax_goal=list(report.argmax_goal) if report.argmax_goal else None,
            operation_bound=report.operation_bound,
            within_bound=report.within_bound,
        )

    @app.post("/artifacts/{artifact_id}/save")
    def save(artifact_id: str, body: schemas.ArtifactFileRequest):
        artifact, _ = get_artifact(artifact_id)
        size = save_artifact(artifact, body.path)
        return {"path": body.path, "bytes": size}

    @app.post("/domains/{domain_id}/artifacts/load", response_model=schemas.ArtifactInfo)
    def load(domain_id: str, body: schemas.LoadArtifactRequest):
        domain = get_domain(domain_id)
        artifact = load_artifact(body.path, domain)
        artifact_id = state.next_id("a")
        state.artifacts[artifact_id] = (artifact, domain_id)
        return _artifact_info(artifact_id, artifact, domain_id)

    @app.post("/domains/{domain_id}/bench", response_model=schemas.BenchResponse)
    def bench(domain_id: str, body: schemas.BenchRequest):
        domain = get_domain(domain_id)
        report = run_benchmark(
            domain,
            tuple(body.start),
            seed=body.seed,
            n_queries=body.queries,
            budget_multiples=tuple(body.budget_multiples),
            planners=tuple(body.planners),
            rrt_timeout=body.rrt_timeout,
            prm_goal_bias=body.prm_goal_bias,
        )
        return schemas.BenchResponse(
            rows=[
                schemas.BenchRowBody(
                    planner=row.planner,
                    budget_s=row.budget_s,
                    mean_ms=row.mean_ms,
                    p100_ms=row.p100_ms,
                    success_pct=row.success_pct,
                    memory_bytes=row.memory_bytes,
                    preprocess_s=row.preprocess_s,
                )
                for row in report.rows
            ],
            csv=report.to_csv(),
        )

    return app


app = create_app()
