import json

import pytest

from goalcover.cli import cli

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


@pytest.fixture
def map_file(tmp_path):
    target = tmp_path / "demo.map"
    target.write_text(MAP_TEXT)
    return target


def test_preprocess_then_query_end_to_end(map_file, tmp_path, capsys):
    artifact = tmp_path / "demo.gcaf"
    assert (
        cli(
            [
                "preprocess",
                "--map",
                str(map_file),
                "--start",
                "0,0",
                "--out",
                str(artifact),
                "--seed",
                "4",
            ]
        )
        == 0
    )
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["subregions"] >= 1
    assert artifact.exists()

    path_file = tmp_path / "path.txt"
    assert (
        cli(
            [
                "query",
                "--map",
                str(map_file),
                "--artifact",
                str(artifact),
                "--goal",
                "6,7",
                "--out",
                str(path_file),
            ]
        )
        == 0
    )
    stats = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert stats["collision_checks"] == 0
    lines = [
        line
        for line in path_file.read_text().splitlines()
        if line and not line.startswith("#")
    ]
    assert lines[0] == "0 0"
    assert lines[-1] == "6 7"


def test_query_out_of_region_goal_exits_one(map_file, tmp_path, capsys):
    artifact = tmp_path / "demo.gcaf"
    cli(
        [
            "preprocess",
            "--map",
            str(map_file),
            "--start",
            "0,0",
            "--out",
            str(artifact),
        ]
    )
    capsys.readouterr()
    code = cli(
        [
            "query",
            "--map",
            str(map_file),
            "--artifact",
            str(artifact),
            "--goal",
            "20,20",
        ]
    )
    assert code == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "NotCovered"


def test_validate_flags_disjoint_goal_boxes(tmp_path, capsys):
    target = tmp_path / "two.map"
    target.write_text(TWO_BOX_MAP)
    code = cli(["validate", "--map", str(target)])
    assert code == 1
    report = json.loads(capsys.readouterr().out.strip())
    convexity = next(c for c in report["checks"] if c["name"] == "goal_convexity")
    assert convexity["violation_count"] > 0
    assert not report["ok"]


def test_validate_clean_map(map_file, capsys):
    assert cli(["validate", "--map", str(map_file)]) == 0
    report = json.loads(capsys.readouterr().out.strip())
    assert report["ok"]
    assert all(c["violation_count"] == 0 for c in report["checks"])


def test_validate_audits_artifact(map_file, tmp_path, capsys):
    artifact = tmp_path / "demo.gcaf"
    cli(["preprocess", "--map", str(map_file), "--start", "0,0", "--out", str(artifact)])
    capsys.readouterr()
    assert (
        cli(["validate", "--map", str(map_file), "--artifact", str(artifact)]) == 0
    )
    report = json.loads(capsys.readouterr().out.strip())
    assert report["artifact_audit"]["ok"]
    assert report["artifact_audit"]["uncovered"] == []


def test_profile_certificate(map_file, tmp_path, capsys):
    artifact = tmp_path / "demo.gcaf"
    cli(["preprocess", "--map", str(map_file), "--start", "0,0", "--out", str(artifact)])
    capsys.readouterr()
    assert (
        cli(["profile", "--map", str(map_file), "--artifact", str(artifact)]) == 0
    )
    cert = json.loads(capsys.readouterr().out.strip())
    assert cert["within_bound"]
    assert cert["max_ops"] <= cert["operation_bound"]
    assert cert["queries"] == 78  # 81 cells minus the three wall cells


def test_missing_artifact_is_data_error(map_file, tmp_path, capsys):
    code = cli(
        [
            "query",
            "--map",
            str(map_file),
            "--artifact",
            str(tmp_path / "absent.gcaf"),
            "--goal",
            "1,1",
        ]
    )
    assert code == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "IoError"


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as excinfo:
        cli(["query", "--goal", "1,1"])  # no domain/artifact
    assert excinfo.value.code == 2


def test_bench_scenario(map_file, tmp_path, capsys):
    scenario = tmp_path / "scenario.json"
    scenario.write_text(
        json.dumps(
            {
                "map": str(map_file),
                "start": [0, 0],
                "seed": 2,
                "queries": 4,
                "budget_multiples": [1.0],
                "planners": ["coverage", "prm"],
            }
        )
    )
    out_csv = tmp_path / "bench.csv"
    assert cli(["bench", "--scenario", str(scenario), "--out", str(out_csv)]) == 0
    text = out_csv.read_text()
    assert text.splitlines()[0] == "planner,budget_s,mean_ms,p100_ms,success_pct,memory_bytes"
    assert any(line.startswith("coverage,") for line in text.splitlines())
