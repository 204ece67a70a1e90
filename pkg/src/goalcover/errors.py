"""Exception taxonomy shared by every goalcover module.

Each exception class name doubles as the machine-readable error category
emitted by the CLI and the HTTP service.
"""

from __future__ import annotations


class GoalcoverError(Exception):
    """Base class for all goalcover errors."""

    @property
    def category(self) -> str:
        return type(self).__name__


class DimensionMismatch(GoalcoverError):
    """A state's coordinate count differs from the domain dimension."""


class NotNeighbors(GoalcoverError):
    """Edge query between two states that are not one primitive apart."""


class EmptyPredecessors(GoalcoverError):
    """A domain produced no predecessors for a state (malformed domain)."""


class BudgetExceeded(GoalcoverError):
    """An enumeration exceeded its configured budget."""


class InvalidAttractor(GoalcoverError):
    """Attractor candidate is invalid or outside the goal region."""


class StartInvalid(GoalcoverError):
    """The fixed start state is in collision."""


class PlanTimeout(GoalcoverError):
    """An offline planner ran out of its wall-clock budget."""


class PlannerFailure(GoalcoverError):
    """Preprocessing finished with attractors that never received a path.

    The partially built artifact is attached so callers can inspect or
    persist it; ``orphans`` lists the attractor states without paths.
    """

    def __init__(self, message: str, *, orphans=(), artifact=None):
        super().__init__(message)
        self.orphans = tuple(orphans)
        self.artifact = artifact


class NotCovered(GoalcoverError):
    """No stored subregion covers the queried goal state.

    Raised for invalid goals, goals outside the goal region, or a
    mismatched artifact; ``scans`` records how many subregions were tested.
    """

    def __init__(self, message: str, *, scans: int = 0):
        super().__init__(message)
        self.scans = scans


class StepBudgetExceeded(GoalcoverError):
    """Greedy walk exceeded the recorded subregion depth (hard fault)."""


class FingerprintMismatch(GoalcoverError):
    """Artifact was built against a different domain configuration."""


class ChecksumMismatch(GoalcoverError):
    """Artifact bytes fail their integrity checksum."""


class VersionUnsupported(GoalcoverError):
    """Artifact or map file carries an unknown format version."""


class ParseError(GoalcoverError):
    """Malformed map, scene, or scenario file."""


class InconsistentDims(GoalcoverError):
    """Map body disagrees with the declared dimensions."""
