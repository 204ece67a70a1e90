import hashlib
import struct

import pytest

from goalcover.errors import (
    ChecksumMismatch,
    FingerprintMismatch,
    ParseError,
    VersionUnsupported,
)
from goalcover.persistence import (
    ARTIFACT_MAGIC,
    artifact_bytes,
    load_artifact,
    load_roadmap,
    roadmap_bytes,
    save_artifact,
    save_roadmap,
)
from goalcover.planners import prm_build

from conftest import box_grid


def test_artifact_round_trip_structural(walled_box, walled_box_artifact, tmp_path):
    target = tmp_path / "walled.gcaf"
    size = save_artifact(walled_box_artifact, target)
    assert size == target.stat().st_size
    loaded = load_artifact(target, walled_box)
    assert loaded.subregions == walled_box_artifact.subregions
    assert loaded.invalid_subregions == walled_box_artifact.invalid_subregions
    assert loaded.library == walled_box_artifact.library
    assert loaded.start == walled_box_artifact.start
    assert loaded.domain_fingerprint == walled_box_artifact.domain_fingerprint
    assert loaded.stats.seed == walled_box_artifact.stats.seed
    # Wall clock is not persisted, by design.
    assert loaded.stats.preprocess_seconds == 0.0


def test_artifact_bytes_stable_under_round_trip(walled_box, walled_box_artifact):
    data = artifact_bytes(walled_box_artifact)
    loaded = load_artifact(data, walled_box)
    assert artifact_bytes(loaded) == data


def test_artifact_rejects_flipped_byte(walled_box, walled_box_artifact):
    data = bytearray(artifact_bytes(walled_box_artifact))
    data[-40] ^= 0xFF  # inside the path blobs
    with pytest.raises(ChecksumMismatch):
        load_artifact(bytes(data), walled_box)


def test_artifact_rejects_moved_obstacle(walled_box_artifact):
    moved = box_grid((20, 20), occupied={(10, y) for y in range(7, 13)})
    with pytest.raises(FingerprintMismatch):
        load_artifact(artifact_bytes(walled_box_artifact), moved)


def test_artifact_rejects_unknown_version(walled_box, walled_box_artifact):
    data = bytearray(artifact_bytes(walled_box_artifact))
    body = data[:-16]
    struct.pack_into("<H", body, 4, 99)  # version field after magic
    digest = hashlib.blake2b(bytes(body), digest_size=16).digest()
    with pytest.raises(VersionUnsupported):
        load_artifact(bytes(body) + digest, walled_box)


def test_artifact_rejects_wrong_magic(walled_box):
    with pytest.raises(ParseError):
        load_artifact(b"NOPE" + b"\x00" * 64, walled_box)


def test_artifact_rejects_truncation(walled_box, walled_box_artifact):
    data = artifact_bytes(walled_box_artifact)
    with pytest.raises((ParseError, ChecksumMismatch)):
        load_artifact(data[: len(data) // 2], walled_box)


def test_magic_constant():
    assert ARTIFACT_MAGIC == b"GCAF"


def test_roadmap_round_trip(tmp_path):
    world = box_grid((15, 15), occupied={(7, 7), (7, 8)})
    roadmap = prm_build(world, (0, 0), seed=6, n_vertices=40)
    target = tmp_path / "grid.gcrm"
    save_roadmap(roadmap, target)
    loaded = load_roadmap(target, world)
    assert loaded.vertices == roadmap.vertices
    assert loaded.edges == roadmap.edges
    assert loaded.start == roadmap.start
    assert loaded.start_costs == roadmap.start_costs
    assert loaded.start_paths == roadmap.start_paths
    assert loaded.k == roadmap.k
    assert roadmap_bytes(loaded) == roadmap_bytes(roadmap)


def test_roadmap_rejects_other_domain():
    world = box_grid((15, 15))
    other = box_grid((15, 15), occupied={(1, 1)})
    roadmap = prm_build(world, (0, 0), seed=6, n_vertices=20)
    with pytest.raises(FingerprintMismatch):
        load_roadmap(roadmap_bytes(roadmap), other)
