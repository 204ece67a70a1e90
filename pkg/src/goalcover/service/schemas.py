"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ErrorBody(BaseModel):
    error: str
    detail: str


class LoadDomainRequest(BaseModel):
    map_text: str | None = None
    scene: dict | None = None


class DomainInfo(BaseModel):
    domain_id: str
    kind: str
    dimension: int
    fingerprint: str
    goal_states: int
    branching_factor: int


class PreprocessRequest(BaseModel):
    start: list[int]
    seed: int = 0
    epsilon: float = 1e-6
    timeout_schedule: list[float] = Field(default_factory=lambda: [10.0, 60.0])
    depth_cap: int | None = None
    planner: str = "astar"


class PreprocessStatsBody(BaseModel):
    seed: int
    epsilon: float
    timeout_schedule: list[float]
    tiers_used: int
    subregion_count: int
    invalid_subregion_count: int
    pruned_count: int
    planner_timeouts: int
    retried_attractors: int
    incomplete: bool
    preprocess_seconds: float


class PreprocessResponse(BaseModel):
    artifact_id: str
    domain_id: str
    stats: PreprocessStatsBody


class QueryRequest(BaseModel):
    goal: list[int]


class QueryStatsBody(BaseModel):
    subregion_scans: int
    greedy_expansions: int
    predecessor_evaluations: int
    collision_checks: int
    wall_seconds: float


class QueryResponse(BaseModel):
    path: list[list[int]]
    cost: float
    stats: QueryStatsBody


class ProfileResponse(BaseModel):
    queries: int
    max_wall_seconds: float
    max_ops: int
    argmax_goal: list[int] | None
    operation_bound: int
    within_bound: bool


class ValidateRequest(BaseModel):
    pair_budget: int = 250_000
    sample_size: int = 20_000
    seed: int = 0


class CheckReportBody(BaseModel):
    name: str
    mode: str
    pairs_checked: int
    violation_count: int
    violations: list[list[list[int]]]


class ValidateResponse(BaseModel):
    ok: bool
    checks: list[CheckReportBody]


class ArtifactFileRequest(BaseModel):
    path: str


class LoadArtifactRequest(BaseModel):
    path: str


class ArtifactInfo(BaseModel):
    artifact_id: str
    domain_id: str
    subregions: int
    invalid_subregions: int
    start: list[int]
    incomplete: bool


class BenchRequest(BaseModel):
    start: list[int]
    seed: int = 0
    queries: int = 50
    budget_multiples: list[float] = Field(default_factory=lambda: [1.0, 4.0])
    planners: list[str] = Field(default_factory=lambda: ["coverage", "prm"])
    rrt_timeout: float = 0.5
    prm_goal_bias: float = 0.0


class BenchRowBody(BaseModel):
    planner: str
    budget_s: float
    mean_ms: float
    p100_ms: float
    success_pct: float
    memory_bytes: int
    preprocess_s: float


class BenchResponse(BaseModel):
    rows: list[BenchRowBody]
    csv: str


class HealthResponse(BaseModel):
    status: str
    version: str
    domains: int
    artifacts: int
