import io
import math

import pytest

from goalcover.domains import (
    Circle,
    ConvexPolygon,
    GridWorld,
    PlanarArm,
    dump_gridmap,
    load_arm_scene,
    load_gridmap,
)
from goalcover.domains.arm import dump_arm_scene, point_segment_distance
from goalcover.errors import (
    DimensionMismatch,
    InconsistentDims,
    NotNeighbors,
    ParseError,
)
from goalcover.lattice import GoalRegionSpec

from conftest import box_grid


def test_grid_validity_basics():
    world = box_grid((9, 9), occupied={(3, 3)})
    assert world.is_valid((1, 1))
    assert not world.is_valid((3, 3))
    assert not world.is_valid((9, 0))
    assert not world.is_valid((-1, 0))


def test_grid_validity_counts_checks():
    world = box_grid((9, 9))
    before = world.counters.state_checks
    world.is_valid((1, 1))
    world.is_valid((2, 2))
    assert world.counters.state_checks == before + 2


def test_dimension_mismatch():
    world = box_grid((9, 9))
    with pytest.raises(DimensionMismatch):
        world.is_valid((1, 2, 3))


def test_edge_validity_grid():
    world = box_grid((9, 9), occupied={(3, 3)})
    assert world.edge_valid((2, 2), (2, 3))
    assert not world.edge_valid((2, 3), (3, 3))
    with pytest.raises(NotNeighbors):
        world.edge_valid((0, 0), (5, 5))


def test_edge_validity_symmetric():
    world = box_grid((9, 9), occupied={(3, 3), (5, 5)})
    pairs = [((2, 2), (3, 3)), ((4, 4), (5, 5)), ((1, 1), (2, 2))]
    for a, b in pairs:
        assert world.edge_valid(a, b) == world.edge_valid(b, a)


MAP_TEXT = """goalcover-map 1
dims: 6 4
connectivity: 8
goal: 0 0 5 3
raster:
......
..##..
......
....#.
"""


def test_load_gridmap_raster():
    world = load_gridmap(MAP_TEXT)
    assert world.dims == (6, 4)
    assert world.occupied == {(2, 1), (3, 1), (4, 3)}
    assert world.goal_boxes[0].upper == (5, 3)


def test_load_gridmap_cell_list_and_empty_body():
    text = "goalcover-map 1\ndims: 4 4\ngoal: 0 0 3 3\nobstacles:\n1 2\n"
    world = load_gridmap(text)
    assert world.occupied == {(1, 2)}
    bare = load_gridmap("goalcover-map 1\ndims: 4 4\ngoal: 0 0 3 3\n")
    assert bare.occupied == frozenset()


def test_load_gridmap_malformed_header():
    with pytest.raises(ParseError):
        load_gridmap("not-a-map 1\ndims: 4 4\n")
    with pytest.raises(ParseError):
        load_gridmap("goalcover-map 9\ndims: 4 4\ngoal: 0 0 3 3\n")
    with pytest.raises(ParseError):
        load_gridmap("goalcover-map 1\ngoal: 0 0 3 3\n")  # no dims


def test_load_gridmap_inconsistent_raster():
    bad = "goalcover-map 1\ndims: 6 4\ngoal: 0 0 5 3\nraster:\n......\n......\n"
    with pytest.raises(InconsistentDims):
        load_gridmap(bad)
    bad_cell = "goalcover-map 1\ndims: 4 4\ngoal: 0 0 3 3\nobstacles:\n1 2 3\n"
    with pytest.raises(InconsistentDims):
        load_gridmap(bad_cell)


def test_gridmap_round_trip():
    world = load_gridmap(MAP_TEXT)
    sink = io.StringIO()
    dump_gridmap(world, sink)
    again = load_gridmap(sink.getvalue())
    assert again.fingerprint() == world.fingerprint()
    assert again.occupied == world.occupied


def test_fingerprint_sensitivity():
    base = box_grid((9, 9), occupied={(3, 3)})
    moved = box_grid((9, 9), occupied={(3, 4)})
    reweighted = box_grid((9, 9), occupied={(3, 3)}, weights=(1.0, 2.0))
    reconnected = box_grid((9, 9), occupied={(3, 3)}, connectivity="4")
    regoaled = box_grid((9, 9), occupied={(3, 3)}, goal=((0, 0), (7, 7)))
    prints = {
        w.fingerprint() for w in (base, moved, reweighted, reconnected, regoaled)
    }
    assert len(prints) == 5
    rescaled = GridWorld(
        dims=(9, 9),
        occupied={(3, 3)},
        goal_boxes=[GoalRegionSpec((0, 0), (8, 8))],
        resolution=(0.5, 0.5),
    )
    assert rescaled.fingerprint() != base.fingerprint()
    assert box_grid((9, 9), occupied={(3, 3)}).fingerprint() == base.fingerprint()


# -- arm ---------------------------------------------------------------------


def _bare_arm(obstacles=(), links=(0.5, 0.4, 0.3), sweep_points=4):
    n = len(links)
    return PlanarArm(
        link_lengths=links,
        base=(0.0, 0.0),
        deg_per_step=[15.0] * n,
        limit_steps=[(-6, 6)] * n,
        goal_boxes=[GoalRegionSpec((0,) * n, (2,) * n)],
        obstacles=obstacles,
        sweep_points=sweep_points,
    )


def test_arm_forward_kinematics_extended():
    arm = _bare_arm()
    points = arm.joint_points((0, 0, 0))
    tip = points[-1]
    reach = math.hypot(tip[0] - 0.0, tip[1] - 0.0)
    assert abs(reach - sum(arm.link_lengths)) < 1e-9


def test_arm_zero_pose_valid_without_obstacles():
    arm = _bare_arm()
    assert arm.is_valid((0, 0, 0))


def test_arm_joint_limits_bound_validity():
    arm = _bare_arm()
    assert not arm.is_valid((7, 0, 0))
    assert not arm.is_valid((0, -7, 0))


def test_arm_second_link_circle_collision():
    # Circle centered 0.1 above the midpoint of the second link at the
    # zero pose; its radius 0.2 swallows the link.
    links = (0.5, 0.4, 0.3)
    center = (links[0] + links[1] / 2.0, 0.1)
    arm = _bare_arm(obstacles=[Circle(center=center, radius=0.2)], links=links)
    second_link = (arm.joint_points((0, 0, 0))[1], arm.joint_points((0, 0, 0))[2])
    # Independent distance computation confirms the geometry of the case.
    ax, ay = second_link[0]
    bx, by = second_link[1]
    t = ((center[0] - ax) * (bx - ax) + (center[1] - ay) * (by - ay)) / (
        (bx - ax) ** 2 + (by - ay) ** 2
    )
    t = min(1.0, max(0.0, t))
    dist = math.hypot(center[0] - (ax + t * (bx - ax)), center[1] - (ay + t * (by - ay)))
    assert abs(dist - 0.1) < 1e-12
    assert dist < 0.2
    assert not arm.is_valid((0, 0, 0))


def test_point_segment_distance_degenerate():
    assert point_segment_distance((3.0, 4.0), (0.0, 0.0), (0.0, 0.0)) == 5.0


def test_arm_edge_sweep_catches_mid_motion_graze():
    # One link of length 1 swinging from 30 to 60 degrees; a small circle
    # sits on the 45-degree ray. Both endpoint poses clear it, the swept
    # motion does not.
    arm = PlanarArm(
        link_lengths=(1.0,),
        base=(0.0, 0.0),
        deg_per_step=(30.0,),
        limit_steps=[(-6, 6)],
        goal_boxes=[GoalRegionSpec((0,), (3,))],
        obstacles=[Circle(center=(math.cos(math.pi / 4), math.sin(math.pi / 4)), radius=0.06)],
        sweep_points=4,
    )
    assert arm.is_valid((1,))
    assert arm.is_valid((2,))
    assert not arm.edge_valid((1,), (2,))
    # Dense interpolation oracle agrees that the sweep is blocked.
    hits = 0
    for i in range(1, 100):
        t = i / 100.0
        steps = (1.0 + t * 1.0,)
        if not arm._pose_clear(steps):
            hits += 1
    assert hits > 0


def test_arm_edge_sweep_symmetric():
    arm = _bare_arm(obstacles=[Circle(center=(0.7, 0.35), radius=0.12)])
    pairs = [((0, 0, 0), (1, 0, 0)), ((1, 1, 0), (1, 1, 1)), ((2, 0, 0), (2, 1, 0))]
    for a, b in pairs:
        assert arm.edge_valid(a, b) == arm.edge_valid(b, a)


def test_arm_polygon_obstacle():
    square = ConvexPolygon(vertices=((0.6, -0.1), (0.8, -0.1), (0.8, 0.1), (0.6, 0.1)))
    arm = _bare_arm(obstacles=[square])
    assert not arm.is_valid((0, 0, 0))  # extended arm passes through it
    assert arm.is_valid((6, 0, 0))


def test_arm_scene_round_trip():
    arm = _bare_arm(obstacles=[Circle(center=(0.7, 0.5), radius=0.1)])
    sink = io.StringIO()
    dump_arm_scene(arm, sink)
    again = load_arm_scene(sink.getvalue())
    assert again.fingerprint() == arm.fingerprint()


def test_arm_scene_rejects_malformed():
    with pytest.raises(ParseError):
        load_arm_scene("{not json")
    with pytest.raises(ParseError):
        load_arm_scene({"format": "other", "version": 1})
    with pytest.raises(ParseError):
        load_arm_scene(
            {"format": "goalcover-arm-scene", "version": 1, "links": [1.0]}
        )
