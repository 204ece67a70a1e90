"""Independent validation of paths and artifacts.

Nothing here is used while answering queries; these functions re-derive
every guarantee the hard way (explicit validity checks, exhaustive
enumeration, greedy-chain simulation) so tests and the ``validate`` CLI
can catch a broken artifact without trusting the code that built it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .lattice import LatticeDomain, State, greedy_predecessor
from .preprocess import PreprocessArtifact, trace_reachability


def audit_path(
    states: Sequence[State],
    domain: LatticeDomain,
    start: State | None = None,
    end: State | None = None,
) -> list[str]:
    """Re-validate a path end to end; returns human-readable problems."""
    problems: list[str] = []
    if not states:
        return ["path is empty"]
    if start is not None and tuple(states[0]) != tuple(start):
        problems.append(f"path starts at {states[0]}, expected {start}")
    if end is not None and tuple(states[-1]) != tuple(end):
        problems.append(f"path ends at {states[-1]}, expected {end}")
    for i, s in enumerate(states):
        if not domain.is_valid(tuple(s)):
            problems.append(f"state {i} = {s} is invalid")
    prim_set = set(domain.primitives)
    for i, (a, b) in enumerate(zip(states, states[1:])):
        step = tuple(y - x for x, y in zip(a, b))
        if step not in prim_set:
            problems.append(f"step {i} ({a} -> {b}) is not a motion primitive")
        elif not domain.edge_valid(tuple(a), tuple(b)):
            problems.append(f"edge {i} ({a} -> {b}) is invalid")
    return problems


def simulate_greedy_chain(
    state: State, attractor: State, domain: LatticeDomain, max_steps: int
) -> tuple[bool, int]:
    """Walk greedy predecessors checking each edge; (reached, steps)."""
    current = state
    steps = 0
    while current != attractor:
        if steps >= max_steps:
            return False, steps
        nxt = greedy_predecessor(current, attractor, domain)
        if not domain.edge_valid(current, nxt):
            return False, steps
        current = nxt
        steps += 1
    return True, steps


@dataclass
class ArtifactAudit:
    """Outcome of a full artifact re-derivation."""

    problems: list[str] = field(default_factory=list)
    goal_states: int = 0
    valid_goal_states: int = 0
    uncovered_valid_states: list[State] = field(default_factory=list)
    ball_mismatches: int = 0
    greedy_failures: int = 0

    @property
    def ok(self) -> bool:
        return not self.problems and not self.uncovered_valid_states


def audit_artifact(
    artifact: PreprocessArtifact,
    domain: LatticeDomain,
    *,
    check_balls: bool = True,
    check_greedy: bool = True,
    max_reported: int = 20,
) -> ArtifactAudit:
    """Exhaustively re-derive every artifact guarantee.

    Checks, in order: fingerprint, radius ordering, containment pruning,
    library path validity and endpoints, complete coverage of all valid
    goal states, exact agreement of each stored ball with a fresh
    reachability rerun, and greedy-walk validity from every covered state.
    """
    audit = ArtifactAudit()
    h = domain.heuristic

    if artifact.domain_fingerprint != domain.fingerprint():
        audit.problems.append("artifact fingerprint does not match domain")
        return audit

    radii = [s.radius for s in artifact.subregions]
    if radii != sorted(radii, reverse=True):
        audit.problems.append("subregions are not sorted by descending radius")

    subs = artifact.subregions
    for i, a in enumerate(subs):
        for j, b in enumerate(subs):
            if i != j and h(a.attractor, b.attractor) + a.radius <= b.radius:
                audit.problems.append(
                    f"subregion {i} is contained in subregion {j} (prune miss)"
                )

    if len(artifact.library.paths) != len(subs):
        audit.problems.append("library size differs from subregion count")
    for i, sub in enumerate(subs):
        path = artifact.library.paths[sub.path_index]
        for problem in audit_path(
            path.states, domain, start=artifact.start, end=sub.attractor
        ):
            audit.problems.append(f"library path {i}: {problem}")

    for goal in domain.goal_states():
        audit.goal_states += 1
        if not domain.is_valid(goal):
            continue
        audit.valid_goal_states += 1
        if not any(sub.covers(goal, domain) for sub in subs):
            if len(audit.uncovered_valid_states) < max_reported:
                audit.uncovered_valid_states.append(goal)

    if check_balls:
        for i, sub in enumerate(subs):
            trace = trace_reachability(
                sub.attractor, domain, epsilon=artifact.stats.epsilon
            )
            expected = {
                s
                for s in domain.goal_states()
                if h(s, sub.attractor) < sub.radius and domain.is_valid(s)
            }
            if trace.radius != sub.radius or set(trace.reachable) != expected:
                audit.ball_mismatches += 1
                audit.problems.append(
                    f"subregion {i} ball mismatch: stored radius {sub.radius}, "
                    f"rerun radius {trace.radius}, |stored ball| {len(expected)}, "
                    f"|rerun reachable| {len(trace.reachable)}"
                )
            elif trace.depth != sub.depth:
                audit.ball_mismatches += 1
                audit.problems.append(
                    f"subregion {i} depth mismatch: {sub.depth} vs {trace.depth}"
                )

    if check_greedy:
        for sub in subs:
            for goal in domain.goal_states():
                if not sub.covers(goal, domain) or not domain.is_valid(goal):
                    continue
                reached, steps = simulate_greedy_chain(
                    goal, sub.attractor, domain, max_steps=sub.depth
                )
                if not reached:
                    audit.greedy_failures += 1
                    if audit.greedy_failures <= max_reported:
                        audit.problems.append(
                            f"greedy walk from {goal} fails to reach "
                            f"{sub.attractor} within {sub.depth} steps"
                        )
    return audit
