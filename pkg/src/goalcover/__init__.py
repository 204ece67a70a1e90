"""goalcover: preprocess a goal region once, answer goal queries fast.

Offline, the goal region of a lattice domain is decomposed into
attractor-centered heuristic balls whose valid states all reach the
attractor by greedy descent, plus one planned path per attractor.
Online, a query is a ball lookup, a greedy walk, and a splice: no
collision checking, work bounded by the ball count plus walk depth.
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceeded,
    ChecksumMismatch,
    DimensionMismatch,
    EmptyPredecessors,
    FingerprintMismatch,
    GoalcoverError,
    InconsistentDims,
    InvalidAttractor,
    NotCovered,
    NotNeighbors,
    ParseError,
    PlannerFailure,
    PlanTimeout,
    StartInvalid,
    StepBudgetExceeded,
    VersionUnsupported,
)
from .lattice import (
    GoalRegionSpec,
    LatticeDomain,
    State,
    check_goal_convexity,
    check_weak_monotonicity,
    greedy_predecessor,
)
from .paths import PlannedPath, make_path, reverse_path
from .persistence import load_artifact, save_artifact
from .planners import (
    AStarPlanner,
    Roadmap,
    RRTConnectPlanner,
    astar_plan,
    dijkstra_costs,
    prm_build,
    prm_query,
    rrt_connect_plan,
)
from .preprocess import (
    InvalidSubregion,
    PathLibrary,
    PreprocessArtifact,
    PreprocessConfig,
    Subregion,
    compute_reachability,
    find_valid_uncovered_state,
    preprocess_region,
    prune_redundant,
    trace_reachability,
)
from .query import (
    QueryStats,
    compute_path,
    find_covering_subregion,
    find_greedy_path,
    profile_worst_case,
)

__all__ = [
    "AStarPlanner",
    "BudgetExceeded",
    "ChecksumMismatch",
    "DimensionMismatch",
    "EmptyPredecessors",
    "FingerprintMismatch",
    "GoalRegionSpec",
    "GoalcoverError",
    "InconsistentDims",
    "InvalidAttractor",
    "InvalidSubregion",
    "LatticeDomain",
    "NotCovered",
    "NotNeighbors",
    "ParseError",
    "PathLibrary",
    "PlanTimeout",
    "PlannedPath",
    "PlannerFailure",
    "PreprocessArtifact",
    "PreprocessConfig",
    "QueryStats",
    "RRTConnectPlanner",
    "Roadmap",
    "StartInvalid",
    "State",
    "StepBudgetExceeded",
    "Subregion",
    "VersionUnsupported",
    "astar_plan",
    "check_goal_convexity",
    "check_weak_monotonicity",
    "compute_path",
    "compute_reachability",
    "dijkstra_costs",
    "find_covering_subregion",
    "find_greedy_path",
    "find_valid_uncovered_state",
    "greedy_predecessor",
    "load_artifact",
    "make_path",
    "preprocess_region",
    "prm_build",
    "prm_query",
    "profile_worst_case",
    "prune_redundant",
    "reverse_path",
    "rrt_connect_plan",
    "save_artifact",
    "trace_reachability",
]
