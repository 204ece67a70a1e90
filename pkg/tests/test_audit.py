from dataclasses import replace

from goalcover.audit import audit_artifact, audit_path, simulate_greedy_chain

from conftest import box_grid


def test_audit_path_flags_problems(empty_box):
    world = box_grid((9, 9), occupied={(2, 2)})
    assert audit_path([(0, 0), (1, 1), (2, 2)], world) != []  # invalid state
    assert audit_path([(0, 0), (3, 3)], world) != []  # not a primitive step
    assert audit_path([(0, 0), (1, 1)], world, start=(5, 5)) != []
    assert audit_path([(0, 0), (1, 1)], world, end=(5, 5)) != []
    assert audit_path([(0, 0), (1, 1)], world, start=(0, 0), end=(1, 1)) == []


def test_simulate_greedy_chain(empty_box):
    reached, steps = simulate_greedy_chain((6, 7), (4, 4), empty_box, max_steps=10)
    assert reached and steps == 3
    reached, steps = simulate_greedy_chain((6, 7), (4, 4), empty_box, max_steps=1)
    assert not reached


def test_audit_artifact_clean(walled_box, walled_box_artifact):
    audit = audit_artifact(walled_box_artifact, walled_box)
    assert audit.ok
    assert audit.valid_goal_states > 0
    assert audit.ball_mismatches == 0
    assert audit.greedy_failures == 0


def test_audit_artifact_detects_inflated_radius(walled_box, walled_box_artifact):
    subs = list(walled_box_artifact.subregions)
    subs[-1] = replace(subs[-1], radius=subs[-1].radius * 3)
    broken = replace(walled_box_artifact, subregions=tuple(subs))
    audit = audit_artifact(broken, walled_box, check_greedy=False)
    assert not audit.ok


def test_audit_artifact_detects_unsorted_radii(walled_box, walled_box_artifact):
    subs = list(walled_box_artifact.subregions)
    if len(subs) < 2:
        subs = subs * 2
    subs = [subs[-1]] + subs[:-1]
    broken = replace(walled_box_artifact, subregions=tuple(subs))
    audit = audit_artifact(broken, walled_box, check_balls=False, check_greedy=False)
    assert any("sorted" in p for p in audit.problems)
