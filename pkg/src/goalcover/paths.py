"""Lattice paths: the shared output type of planners and queries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .errors import ParseError
from .lattice import LatticeDomain, State, as_state


@dataclass(frozen=True)
class PlannedPath:
    """Ordered lattice states plus the summed per-edge heuristic cost.

    Consecutive states must be one motion primitive apart; the cost is
    always recomputable from the states.
    """

    states: tuple[State, ...]
    cost: float

    @property
    def start(self) -> State:
        return self.states[0]

    @property
    def end(self) -> State:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.states)


def path_cost(states: Sequence[State], domain: LatticeDomain) -> float:
    h = domain.heuristic
    return sum(h(a, b) for a, b in zip(states, states[1:]))


def make_path(states: Iterable[State], domain: LatticeDomain) -> PlannedPath:
    seq = tuple(tuple(s) for s in states)
    if not seq:
        raise ValueError("a path needs at least one state")
    return PlannedPath(states=seq, cost=path_cost(seq, domain))


def reverse_path(path: PlannedPath) -> PlannedPath:
    """Same cost, traversed the other way (undirected lattice)."""
    return PlannedPath(states=tuple(reversed(path.states)), cost=path.cost)


def concatenate(first: PlannedPath, second: PlannedPath) -> PlannedPath:
    """Join two paths sharing one seam state, dropping the duplicate."""
    if first.end != second.start:
        raise ValueError(f"paths do not meet: {first.end} vs {second.start}")
    return PlannedPath(
        states=first.states + second.states[1:], cost=first.cost + second.cost
    )


# -- path file format --------------------------------------------------
#
# One state per line, integer coordinates separated by single spaces.
# Lines starting with '#' are comments. Stable and diff-friendly.


def write_path_file(path: PlannedPath, sink: IO[str]) -> None:
    sink.write(f"# goalcover-path 1 states={len(path.states)} cost={path.cost!r}\n")
    for s in path.states:
        sink.write(" ".join(str(c) for c in s) + "\n")


def read_path_file(source: IO[str]) -> list[State]:
    states: list[State] = []
    for line_no, line in enumerate(source, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            states.append(as_state(text.split()))
        except ValueError as exc:
            raise ParseError(f"path file line {line_no}: {text!r}") from exc
    return states
