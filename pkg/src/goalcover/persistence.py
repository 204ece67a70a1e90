"""Binary serialization for artifacts and roadmaps.

Canonical little-endian layout with a trailing blake2b integrity digest.
Artifacts built from the same seed serialize to identical bytes: wall
clock timings are deliberately left out of the format (they reload as
zero). Loading verifies, in order, magic and version, the checksum, the
domain fingerprint, sorted-radius order, and the endpoint contract of
every library path.
"""

from __future__ import annotations

import hashlib
import io
import struct
from typing import BinaryIO

from .errors import (
    ChecksumMismatch,
    FingerprintMismatch,
    ParseError,
    VersionUnsupported,
)
from .lattice import LatticeDomain, State
from .paths import PlannedPath
from .planners import Roadmap
from .preprocess import (
    InvalidSubregion,
    PathLibrary,
    PreprocessArtifact,
    PreprocessStats,
    Subregion,
)

ARTIFACT_MAGIC = b"GCAF"
ARTIFACT_VERSION = 1
ROADMAP_MAGIC = b"GCRM"
ROADMAP_VERSION = 1
_DIGEST_SIZE = 16


class _Writer:
    def __init__(self) -> None:
        self.buf = io.BytesIO()

    def pack(self, fmt: str, *values) -> None:
        self.buf.write(struct.pack("<" + fmt, *values))

    def state(self, state: State) -> None:
        self.buf.write(struct.pack(f"<{len(state)}i", *state))

    def bytes_with_digest(self) -> bytes:
        body = self.buf.getvalue()
        return body + hashlib.blake2b(body, digest_size=_DIGEST_SIZE).digest()


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def unpack(self, fmt: str):
        fmt = "<" + fmt
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise ParseError("artifact truncated")
        values = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return values if len(values) > 1 else values[0]

def _read_state(reader: _Reader, dimension: int) -> State:
    values = reader.unpack(f"{dimension}i")
    return values if isinstance(values, tuple) else (values,)


def _verify_digest(data: bytes, what: str) -> bytes:
    if len(data) < _DIGEST_SIZE + 8:
        raise ParseError(f"{what} file too short")
    body, digest = data[:-_DIGEST_SIZE], data[-_DIGEST_SIZE:]
    if hashlib.blake2b(body, digest_size=_DIGEST_SIZE).digest() != digest:
        raise ChecksumMismatch(f"{what} failed its integrity check")
    return body


def _open_bytes(source) -> bytes:
    if isinstance(source, (bytes, bytearray)):
        return bytes(source)
    if isinstance(source, (str,)) or hasattr(source, "__fspath__"):
        with open(source, "rb") as handle:
            return handle.read()
    return source.read()


def _write_bytes(data: bytes, sink) -> None:
    if isinstance(sink, (str,)) or hasattr(sink, "__fspath__"):
        with open(sink, "wb") as handle:
            handle.write(data)
    else:
        sink.write(data)


# -- artifacts ---------------------------------------------------------------


def artifact_bytes(artifact: PreprocessArtifact) -> bytes:
    """Canonical serialized form; identical for identically built artifacts."""
    w = _Writer()
    dim = len(artifact.start)
    w.buf.write(ARTIFACT_MAGIC)
    w.pack("HH", ARTIFACT_VERSION, dim)
    w.pack("Q", artifact.domain_fingerprint)
    w.state(artifact.start)

    stats = artifact.stats
    w.pack("q", stats.seed)
    w.pack("d", stats.epsilon)
    w.pack("H", len(stats.timeout_schedule))
    for t in stats.timeout_schedule:
        w.pack("d", t)
    w.pack("H", stats.tiers_used)
    w.pack("III", stats.planner_timeouts, stats.retried_attractors, stats.pruned_count)
    w.pack("B", 1 if stats.incomplete else 0)
    w.pack("I", len(stats.orphan_attractors))
    for s in stats.orphan_attractors:
        w.state(s)

    w.pack("I", len(artifact.subregions))
    for sub in artifact.subregions:
        w.state(sub.attractor)
        w.pack("d", sub.radius)
        w.pack("II", sub.depth, sub.path_index)

    w.pack("I", len(artifact.invalid_subregions))
    for inv in artifact.invalid_subregions:
        w.state(inv.center)
        w.pack("d", inv.radius)

    w.pack("I", len(artifact.library.paths))
    for path in artifact.library.paths:
        w.pack("I", len(path.states))
        w.pack("d", path.cost)
        for s in path.states:
            w.state(s)

    return w.bytes_with_digest()


def save_artifact(artifact: PreprocessArtifact, sink: BinaryIO | str) -> int:
    """Serialize to a path or binary stream; returns the byte count."""
    data = artifact_bytes(artifact)
    _write_bytes(data, sink)
    return len(data)


def load_artifact(source, domain: LatticeDomain) -> PreprocessArtifact:
    """Read, verify, and structurally audit a serialized artifact."""
    data = _open_bytes(source)
    if data[:4] != ARTIFACT_MAGIC:
        raise ParseError("not a goalcover artifact file")
    body = _verify_digest(data, "artifact")
    r = _Reader(body)
    r.pos = 4
    version, dim = r.unpack("HH")
    if version != ARTIFACT_VERSION:
        raise VersionUnsupported(f"artifact version {version} not supported")
    fingerprint = r.unpack("Q")
    if fingerprint != domain.fingerprint():
        raise FingerprintMismatch(
            "artifact fingerprint does not match this domain configuration"
        )
    if dim != domain.dimension:
        raise FingerprintMismatch("artifact dimension differs from domain")
    start = _read_state(r, dim)

    seed = r.unpack("q")
    epsilon = r.unpack("d")
    n_tiers = r.unpack("H")
    tiers = tuple(r.unpack("d") for _ in range(n_tiers))
    tiers_used = r.unpack("H")
    planner_timeouts, retried, pruned = r.unpack("III")
    incomplete = bool(r.unpack("B"))
    n_orphans = r.unpack("I")
    orphans = tuple(_read_state(r, dim) for _ in range(n_orphans))

    n_sub = r.unpack("I")
    subregions = []
    for _ in range(n_sub):
        attractor = _read_state(r, dim)
        radius = r.unpack("d")
        depth, path_index = r.unpack("II")
        subregions.append(
            Subregion(
                attractor=attractor, radius=radius, depth=depth, path_index=path_index
            )
        )

    n_inv = r.unpack("I")
    invalid = []
    for _ in range(n_inv):
        center = _read_state(r, dim)
        radius = r.unpack("d")
        invalid.append(InvalidSubregion(center=center, radius=radius))

    n_paths = r.unpack("I")
    paths = []
    for _ in range(n_paths):
        length = r.unpack("I")
        cost = r.unpack("d")
        states = tuple(_read_state(r, dim) for _ in range(length))
        paths.append(PlannedPath(states=states, cost=cost))

    radii = [s.radius for s in subregions]
    if radii != sorted(radii, reverse=True):
        raise ParseError("artifact subregions are not sorted by descending radius")
    if n_paths != n_sub:
        raise ParseError("artifact library size differs from subregion count")
    prim_set = set(domain.primitives)
    for i, sub in enumerate(subregions):
        if not 0 <= sub.path_index < n_paths:
            raise ParseError(f"subregion {i} has a dangling path index")
        path = paths[sub.path_index]
        if path.states[0] != start or path.states[-1] != sub.attractor:
            raise ParseError(f"library path {i} breaks the endpoint contract")
        for a, b in zip(path.states, path.states[1:]):
            if tuple(y - x for x, y in zip(a, b)) not in prim_set:
                raise ParseError(f"library path {i} contains a non-primitive step")

    stats = PreprocessStats(
        seed=seed,
        epsilon=epsilon,
        timeout_schedule=tiers,
        tiers_used=tiers_used,
        subregion_count=n_sub,
        invalid_subregion_count=n_inv,
        pruned_count=pruned,
        planner_timeouts=planner_timeouts,
        retried_attractors=retried,
        incomplete=incomplete,
        orphan_attractors=orphans,
    )
    return PreprocessArtifact(
        subregions=tuple(subregions),
        invalid_subregions=tuple(invalid),
        library=PathLibrary(paths=tuple(paths)),
        start=start,
        domain_fingerprint=fingerprint,
        stats=stats,
    )


# -- roadmaps ----------------------------------------------------------------


def roadmap_bytes(roadmap: Roadmap) -> bytes:
    w = _Writer()
    dim = len(roadmap.start)
    w.buf.write(ROADMAP_MAGIC)
    w.pack("HH", ROADMAP_VERSION, dim)
    w.pack("Q", roadmap.fingerprint)
    w.pack("q", roadmap.seed)
    w.state(roadmap.start)
    w.pack("I", roadmap.k)
    w.pack("I", roadmap.sample_count)
    w.pack("I", len(roadmap.vertices))
    for v in roadmap.vertices:
        w.state(v)
    w.pack("I", len(roadmap.edges))
    for (i, j), cost in sorted(roadmap.edges.items()):
        w.pack("IId", i, j, cost)
    w.pack("I", len(roadmap.start_paths))
    for i in sorted(roadmap.start_paths):
        path = roadmap.start_paths[i]
        w.pack("Id", i, roadmap.start_costs[i])
        w.pack("I", len(path))
        for s in path:
            w.state(s)
    return w.bytes_with_digest()


def save_roadmap(roadmap: Roadmap, sink: BinaryIO | str) -> int:
    data = roadmap_bytes(roadmap)
    _write_bytes(data, sink)
    return len(data)


def load_roadmap(source, domain: LatticeDomain) -> Roadmap:
    data = _open_bytes(source)
    if data[:4] != ROADMAP_MAGIC:
        raise ParseError("not a goalcover roadmap file")
    body = _verify_digest(data, "roadmap")
    r = _Reader(body)
    r.pos = 4
    version, dim = r.unpack("HH")
    if version != ROADMAP_VERSION:
        raise VersionUnsupported(f"roadmap version {version} not supported")
    fingerprint = r.unpack("Q")
    if fingerprint != domain.fingerprint():
        raise FingerprintMismatch(
            "roadmap fingerprint does not match this domain configuration"
        )
    seed = r.unpack("q")
    start = _read_state(r, dim)
    k = r.unpack("I")
    sample_count = r.unpack("I")
    n = r.unpack("I")
    vertices = [_read_state(r, dim) for _ in range(n)]
    n_edges = r.unpack("I")
    edges: dict[tuple[int, int], float] = {}
    adjacency: dict[int, list[tuple[int, float]]] = {i: [] for i in range(n)}
    for _ in range(n_edges):
        i, j, cost = r.unpack("IId")
        edges[(i, j)] = cost
        adjacency[i].append((j, cost))
        adjacency[j].append((i, cost))
    n_paths = r.unpack("I")
    start_costs: dict[int, float] = {}
    start_paths: dict[int, tuple[State, ...]] = {}
    for _ in range(n_paths):
        i, cost = r.unpack("Id")
        length = r.unpack("I")
        start_paths[i] = tuple(_read_state(r, dim) for _ in range(length))
        start_costs[i] = cost
    return Roadmap(
        vertices=vertices,
        edges=edges,
        adjacency=adjacency,
        start=start,
        start_costs=start_costs,
        start_paths=start_paths,
        k=k,
        seed=seed,
        fingerprint=fingerprint,
        sample_count=sample_count,
    )
