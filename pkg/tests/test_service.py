import pytest
from fastapi.testclient import TestClient

from goalcover.service import create_app

MAP_TEXT = """goalcover-map 1
dims: 9 9
connectivity: 8
goal: 0 0 8 8
raster:
.........
.........
.........
...###...
.........
.........
.........
.........
.........
"""

TWO_BOX_MAP = """goalcover-map 1
dims: 12 12
connectivity: 8
goal: 0 0 2 2
goal: 8 8 10 10
"""

ARM_SCENE = {
    "format": "goalcover-arm-scene",
    "version": 1,
    "links": [0.5, 0.4],
    "base": [0.0, 0.0],
    "deg_per_step": [15.0, 15.0],
    "limit_steps": [[-5, 5], [-5, 5]],
    "goal": {"lower": [0, 0], "upper": [2, 2]},
    "obstacles": [{"type": "circle", "center": [0.5, 0.6], "radius": 0.1}],
}


@pytest.fixture
def client():
    return TestClient(create_app())


@pytest.fixture
def domain_id(client):
    response = client.post("/domains", json={"map_text": MAP_TEXT})
    assert response.status_code == 200
    return response.json()["domain_id"]


@pytest.fixture
def artifact_id(client, domain_id):
    response = client.post(
        f"/domains/{domain_id}/preprocess", json={"start": [0, 0], "seed": 4}
    )
    assert response.status_code == 200
    return response.json()["artifact_id"]


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_load_domain_info(client, domain_id):
    body = client.get(f"/domains/{domain_id}").json()
    assert body["kind"] == "grid"
    assert body["dimension"] == 2
    assert body["goal_states"] == 81


def test_load_domain_requires_exactly_one_source(client):
    assert client.post("/domains", json={}).status_code == 422
    both = client.post(
        "/domains", json={"map_text": MAP_TEXT, "scene": ARM_SCENE}
    )
    assert both.status_code == 422


def test_load_arm_scene_domain(client):
    response = client.post("/domains", json={"scene": ARM_SCENE})
    assert response.status_code == 200
    assert response.json()["kind"] == "planar-arm"


def test_unknown_domain_is_404(client):
    assert client.get("/domains/none").status_code == 404


def test_preprocess_and_query(client, domain_id, artifact_id):
    response = client.post(
        f"/artifacts/{artifact_id}/query", json={"goal": [6, 7]}
    )
    assert response.status_code == 200
    body = response.json()
    assert body["path"][0] == [0, 0]
    assert body["path"][-1] == [6, 7]
    assert body["stats"]["collision_checks"] == 0


def test_query_outside_region_is_404(client, artifact_id):
    response = client.post(
        f"/artifacts/{artifact_id}/query", json={"goal": [50, 50]}
    )
    assert response.status_code == 404
    assert response.json()["error"] == "NotCovered"


def test_profile_endpoint(client, artifact_id):
    body = client.post(f"/artifacts/{artifact_id}/profile").json()
    assert body["within_bound"]
    assert body["queries"] == 78


def test_validate_endpoint_flags_two_boxes(client):
    domain = client.post("/domains", json={"map_text": TWO_BOX_MAP}).json()
    body = client.post(
        f"/domains/{domain['domain_id']}/validate", json={}
    ).json()
    assert not body["ok"]
    convexity = next(c for c in body["checks"] if c["name"] == "goal_convexity")
    assert convexity["violation_count"] > 0


def test_artifact_save_and_load(client, domain_id, artifact_id, tmp_path):
    target = tmp_path / "served.gcaf"
    saved = client.post(
        f"/artifacts/{artifact_id}/save", json={"path": str(target)}
    )
    assert saved.status_code == 200
    assert target.exists()
    loaded = client.post(
        f"/domains/{domain_id}/artifacts/load", json={"path": str(target)}
    )
    assert loaded.status_code == 200
    again = loaded.json()["artifact_id"]
    response = client.post(f"/artifacts/{again}/query", json={"goal": [2, 2]})
    assert response.status_code == 200


def test_artifact_load_against_wrong_domain_conflicts(
    client, artifact_id, tmp_path
):
    target = tmp_path / "served.gcaf"
    client.post(f"/artifacts/{artifact_id}/save", json={"path": str(target)})
    other = client.post("/domains", json={"map_text": TWO_BOX_MAP}).json()
    response = client.post(
        f"/domains/{other['domain_id']}/artifacts/load",
        json={"path": str(target)},
    )
    assert response.status_code == 409
    assert response.json()["error"] == "FingerprintMismatch"


def test_bench_endpoint(client, domain_id):
    response = client.post(
        f"/domains/{domain_id}/bench",
        json={
            "start": [0, 0],
            "queries": 4,
            "budget_multiples": [1.0],
            "planners": ["coverage"],
        },
    )
    assert response.status_code == 200
    body = response.json()
    assert body["rows"][0]["planner"] == "coverage"
    assert body["rows"][0]["success_pct"] == 100.0
    assert body["csv"].startswith("planner,budget_s,")
