"""Command-line surface: preprocess, query, profile, validate, bench.

Thin argument translation over the package API. Data failures print a
machine-readable ``{"error": category, "detail": ...}`` line to stderr
and exit 1; usage problems exit 2.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .audit import audit_artifact
from .bench import run_benchmark
from .domains import load_arm_scene, load_gridmap
from .errors import GoalcoverError, NotCovered
from .lattice import (
    DEFAULT_PAIR_BUDGET,
    DEFAULT_SAMPLE_SIZE,
    check_goal_convexity,
    check_weak_monotonicity,
)
from .paths import write_path_file
from .persistence import load_artifact, save_artifact
from .planners import AStarPlanner, RRTConnectPlanner
from .preprocess import PreprocessConfig, preprocess_region
from .query import compute_path, profile_worst_case


def _add_domain_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--map", help="grid map file")
    group.add_argument("--scene", help="arm scene JSON file")


def _load_domain(args):
    if args.map:
        with open(args.map) as handle:
            return load_gridmap(handle)
    with open(args.scene) as handle:
        return load_arm_scene(handle)


def _parse_state(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError:
        raise SystemExit(2)


def _emit_error(exc: Exception) -> int:
    category = exc.category if isinstance(exc, GoalcoverError) else "IoError"
    print(
        json.dumps({"error": category, "detail": str(exc)}),
        file=sys.stderr,
    )
    return 1


def _cmd_preprocess(args) -> int:
    domain = _load_domain(args)
    config = PreprocessConfig(
        seed=args.seed,
        epsilon=args.epsilon,
        timeout_schedule=tuple(float(t) for t in args.timeouts.split(",")),
        depth_cap=args.depth_cap,
    )
    if args.planner == "astar":
        planner = AStarPlanner()
    else:
        planner = RRTConnectPlanner(seed=args.seed)
    artifact = preprocess_region(domain, _parse_state(args.start), planner, config)
    size = save_artifact(artifact, args.out)
    stats = artifact.stats
    print(
        json.dumps(
            {
                "artifact": args.out,
                "bytes": size,
                "subregions": stats.subregion_count,
                "invalid_subregions": stats.invalid_subregion_count,
                "pruned": stats.pruned_count,
                "planner_timeouts": stats.planner_timeouts,
                "tiers_used": stats.tiers_used,
                "preprocess_seconds": round(stats.preprocess_seconds, 6),
            }
        )
    )
    return 0


def _cmd_query(args) -> int:
    domain = _load_domain(args)
    artifact = load_artifact(args.artifact, domain)
    goal = _parse_state(args.goal)
    if len(goal) != domain.dimension:
        raise NotCovered(f"goal {goal} has wrong dimension")
    if not domain.in_goal(goal):
        raise NotCovered(f"goal {goal} is outside the goal region")
    path, stats = compute_path(goal, artifact, domain)
    if args.out:
        with open(args.out, "w") as handle:
            write_path_file(path, handle)
    else:
        for state in path.states:
            print(" ".join(str(c) for c in state))
    print(
        json.dumps(
            {
                "cost": path.cost,
                "states": len(path.states),
                "subregion_scans": stats.subregion_scans,
                "greedy_expansions": stats.greedy_expansions,
                "predecessor_evaluations": stats.predecessor_evaluations,
                "collision_checks": stats.collision_checks,
                "wall_seconds": stats.wall_time,
            }
        )
    )
    return 0


def _cmd_profile(args) -> int:
    domain = _load_domain(args)
    artifact = load_artifact(args.artifact, domain)
    report = profile_worst_case(artifact, domain)
    print(
        json.dumps(
            {
                "queries": report.query_count,
                "max_wall_seconds": report.max_wall_time,
                "max_ops": report.max_ops,
                "argmax_goal": list(report.argmax_goal or ()),
                "operation_bound": report.operation_bound,
                "within_bound": report.within_bound,
            }
        )
    )
    return 0 if report.within_bound else 1


def _cmd_validate(args) -> int:
    domain = _load_domain(args)
    weak = check_weak_monotonicity(
        domain, pair_budget=args.pair_budget, sample_size=args.sample_size
    )
    convex = check_goal_convexity(
        domain, pair_budget=args.pair_budget, sample_size=args.sample_size
    )
    result = {
        "checks": [
            {
                "name": report.name,
                "mode": report.mode,
                "pairs_checked": report.pairs_checked,
                "violations": [
                    [list(a), list(b)] for a, b in report.violations[:20]
                ],
                "violation_count": len(report.violations),
            }
            for report in (weak, convex)
        ]
    }
    ok = weak.ok and convex.ok
    if args.artifact:
        artifact = load_artifact(args.artifact, domain)
        audit = audit_artifact(artifact, domain)
        result["artifact_audit"] = {
            "ok": audit.ok,
            "problems": audit.problems[:20],
            "goal_states": audit.goal_states,
            "valid_goal_states": audit.valid_goal_states,
            "uncovered": [list(s) for s in audit.uncovered_valid_states[:20]],
        }
        ok = ok and audit.ok
    result["ok"] = ok
    print(json.dumps(result))
    return 0 if ok else 1


def _cmd_bench(args) -> int:
    with open(args.scenario) as handle:
        scenario = json.load(handle)

    class _Namespace:
        map = scenario.get("map")
        scene = scenario.get("scene")

    if not (_Namespace.map or _Namespace.scene):
        raise SystemExit(2)
    domain = _load_domain(_Namespace)
    report = run_benchmark(
        domain,
        tuple(scenario["start"]),
        seed=scenario.get("seed", 0),
        n_queries=scenario.get("queries", 100),
        budget_multiples=tuple(scenario.get("budget_multiples", [1, 2, 4])),
        planners=tuple(scenario.get("planners", ["coverage", "prm", "rrt-connect"])),
        rrt_timeout=scenario.get("rrt_timeout", 0.5),
        prm_goal_bias=scenario.get("prm_goal_bias", 0.0),
    )
    csv_text = report.to_csv()
    out = args.out or scenario.get("out_csv")
    if out:
        with open(out, "w") as handle:
            handle.write(csv_text)
    print(csv_text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goalcover",
        description="Preprocess a goal region once, answer goal queries "
        "in bounded time without online collision checks.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="build an artifact from a domain file")
    _add_domain_args(p)
    p.add_argument("--start", required=True, help="start state, e.g. '2,2'")
    p.add_argument("--out", required=True, help="artifact output path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--timeouts", default="10,60", help="planner timeout tiers")
    p.add_argument("--depth-cap", type=int, default=None)
    p.add_argument("--planner", choices=("astar", "rrt-connect"), default="astar")
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("query", help="answer one goal query from an artifact")
    _add_domain_args(p)
    p.add_argument("--artifact", required=True)
    p.add_argument("--goal", required=True, help="goal state, e.g. '6,7'")
    p.add_argument("--out", help="path file destination (default: stdout)")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("profile", help="worst-case certificate over all goals")
    _add_domain_args(p)
    p.add_argument("--artifact", required=True)
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("validate", help="heuristic assumption and artifact audits")
    _add_domain_args(p)
    p.add_argument("--artifact", help="also audit this artifact")
    p.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET)
    p.add_argument("--sample-size", type=int, default=DEFAULT_SAMPLE_SIZE)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("bench", help="run the benchmark scenario file")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", help="CSV destination (overrides scenario)")
    p.set_defaults(func=_cmd_bench)

    return parser


def cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s %(message)s",
    )
    try:
        return args.func(args)
    except GoalcoverError as exc:
        return _emit_error(exc)
    except OSError as exc:
        return _emit_error(exc)


def main(argv=None) -> int:
    return cli(argv)


if __name__ == "__main__":
    sys.exit(main())
