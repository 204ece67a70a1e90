"""n-dimensional occupancy-grid domain and its map file format.

A state is valid when it lies inside the per-axis extents and its cell is
not occupied. Edges are valid when both endpoints are (cells are small
enough that no swept test is needed).

Map file format (version 1, text)::

    goalcover-map 1
    dims: 9 9
    connectivity: 8          # 2D: 4|8; any-D: axis|full
    weights: 1.0 1.0         # optional, default 1.0 per axis
    resolution: 1.0 1.0      # optional metadata, units per step
    goal: 0 0 8 8            # lower coords then upper coords; repeatable
    obstacles:               # optional: one blocked cell per line
    2 3
    raster:                  # 2D only, alternative to obstacles:
    .........                # '.' free, '#' blocked; row r = axis-1 coord r

Exactly one of ``obstacles:``/``raster:`` may appear (or neither).
"""

from __future__ import annotations

from typing import IO, Iterable, Sequence

from ..errors import InconsistentDims, ParseError
from ..lattice import (
    GoalRegionSpec,
    LatticeDomain,
    Offset,
    State,
    as_state,
    axis_primitives,
    full_primitives,
)

MAP_MAGIC = "goalcover-map"
MAP_VERSION = 1


def _primitives_for(connectivity: str, dimension: int) -> tuple[Offset, ...]:
    if connectivity in ("4", "axis"):
        return axis_primitives(dimension)
    if connectivity in ("8", "full"):
        return full_primitives(dimension)
    raise ParseError(f"unknown connectivity {connectivity!r}")


class GridWorld(LatticeDomain):
    """Occupancy grid over ``[0, dims[k])`` per axis."""

    def __init__(
        self,
        dims: Sequence[int],
        occupied: Iterable[State],
        goal_boxes: Sequence[GoalRegionSpec],
        connectivity: str = "8",
        weights: Sequence[float] | None = None,
        resolution: Sequence[float] | None = None,
    ):
        self.dims = tuple(int(d) for d in dims)
        if any(d <= 0 for d in self.dims):
            raise ValueError("grid extents must be positive")
        self.connectivity = connectivity
        self.occupied = frozenset(as_state(c) for c in occupied)
        for cell in self.occupied:
            if len(cell) != len(self.dims):
                raise InconsistentDims(f"blocked cell {cell} has wrong arity")
        super().__init__(
            dimension=len(self.dims),
            primitives=_primitives_for(connectivity, len(self.dims)),
            goal_boxes=goal_boxes,
            weights=weights,
            resolution=resolution,
        )

    def _valid(self, state: State) -> bool:
        if any(not 0 <= c < d for c, d in zip(state, self.dims)):
            return False
        return state not in self.occupied

    def coordinate_bounds(self) -> tuple[tuple[int, int], ...]:
        return tuple((0, d - 1) for d in self.dims)

    def config_document(self) -> dict:
        return {
            "type": "grid",
            "version": MAP_VERSION,
            "dims": list(self.dims),
            "connectivity": self.connectivity,
            "weights": list(self.weights),
            "resolution": list(self.resolution),
            "goal": [
                {"lower": list(b.lower), "upper": list(b.upper)}
                for b in self.goal_boxes
            ],
            "occupied": sorted(list(c) for c in self.occupied),
        }


# -- map files ----------------------------------------------------------


def _parse_ints(text: str, what: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise ParseError(f"bad {what}: {text!r}") from exc


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split()]
    except ValueError as exc:
        raise ParseError(f"bad {what}: {text!r}") from exc


def load_gridmap(source: IO[str] | str) -> GridWorld:
    """Parse a map document into a :class:`GridWorld`."""
    text = source if isinstance(source, str) else source.read()
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty map file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != MAP_MAGIC:
        raise ParseError(f"not a {MAP_MAGIC} file: {lines[0]!r}")
    if header[1] != str(MAP_VERSION):
        raise ParseError(f"unsupported map version {header[1]!r}")

    dims: list[int] | None = None
    connectivity = "8"
    weights: list[float] | None = None
    resolution: list[float] | None = None
    goal_boxes: list[GoalRegionSpec] = []
    occupied: list[State] = []
    section: str | None = None
    raster_rows: list[str] = []

    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.split("#", 1)[0].rstrip() if section != "raster" else raw.rstrip()
        if not line.strip():
            continue
        if section == "obstacles":
            occupied.append(tuple(_parse_ints(line, "blocked cell")))
            continue
        if section == "raster":
            raster_rows.append(line)
            continue
        stripped = line.strip()
        if stripped == "obstacles:":
            section = "obstacles"
            continue
        if stripped == "raster:":
            section = "raster"
            continue
        if ":" not in stripped:
            raise ParseError(f"line {line_no}: expected 'key: value', got {raw!r}")
        key, _, value = stripped.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "dims":
            dims = _parse_ints(value, "dims")
        elif key == "connectivity":
            connectivity = value
        elif key == "weights":
            weights = _parse_floats(value, "weights")
        elif key == "resolution":
            resolution = _parse_floats(value, "resolution")
        elif key == "goal":
            coords = _parse_ints(value, "goal box")
            if len(coords) % 2 != 0 or not coords:
                raise ParseError(f"goal box needs lower+upper coords: {value!r}")
            half = len(coords) // 2
            goal_boxes.append(
                GoalRegionSpec(tuple(coords[:half]), tuple(coords[half:]))
            )
        else:
            raise ParseError(f"line {line_no}: unknown key {key!r}")

    if dims is None:
        raise ParseError("map file missing 'dims:'")
    if not goal_boxes:
        raise ParseError("map file missing 'goal:'")

    if raster_rows:
        if occupied:
            raise ParseError("map file has both obstacles and raster sections")
        if len(dims) != 2:
            raise InconsistentDims("raster bodies are 2D only")
        if len(raster_rows) != dims[1]:
            raise InconsistentDims(
                f"raster has {len(raster_rows)} rows, dims expect {dims[1]}"
            )
        for y, row in enumerate(raster_rows):
            if len(row) != dims[0]:
                raise InconsistentDims(
                    f"raster row {y} has {len(row)} cells, dims expect {dims[0]}"
                )
            for x, ch in enumerate(row):
                if ch == "#":
                    occupied.append((x, y))
                elif ch != ".":
                    raise ParseError(f"raster cell {x},{y}: {ch!r}")

    for cell in occupied:
        if len(cell) != len(dims):
            raise InconsistentDims(f"blocked cell {cell} arity != dims")
    for box in goal_boxes:
        if box.dimension != len(dims):
            raise InconsistentDims("goal box arity != dims")

    return GridWorld(
        dims=dims,
        occupied=occupied,
        goal_boxes=goal_boxes,
        connectivity=connectivity,
        weights=weights,
        resolution=resolution,
    )


def dump_gridmap(world: GridWorld, sink: IO[str]) -> None:
    """Write the map document back out (blocked-cell list body)."""
    sink.write(f"{MAP_MAGIC} {MAP_VERSION}\n")
    sink.write("dims: " + " ".join(str(d) for d in world.dims) + "\n")
    sink.write(f"connectivity: {world.connectivity}\n")
    sink.write("weights: " + " ".join(repr(w) for w in world.weights) + "\n")
    sink.write("resolution: " + " ".join(repr(r) for r in world.resolution) + "\n")
    for box in world.goal_boxes:
        coords = list(box.lower) + list(box.upper)
        sink.write("goal: " + " ".join(str(c) for c in coords) + "\n")
    if world.occupied:
        sink.write("obstacles:\n")
        for cell in sorted(world.occupied):
            sink.write(" ".join(str(c) for c in cell) + "\n")
