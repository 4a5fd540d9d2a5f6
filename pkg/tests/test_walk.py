"""Walk engine invariants: exits land on the boundary, batching never
changes results, step sizes respect the distance cap."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballwalk import (
    BALL,
    SPHERE,
    STOP_TOLERANCE_FACTOR,
    Ball,
    Box,
    RngStream,
    WalkConfig,
    ball_walk_step,
    run_stopped_walks,
    run_until_exit_ball,
    run_walk,
    run_walks,
    sample_unit_ball,
    sphere_walk_step,
)

DISK = Ball((0.0, 0.0), 1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        WalkConfig(0.0)
    with pytest.raises(ValueError):
        WalkConfig(1.0)
    with pytest.raises(ValueError):
        WalkConfig(1.5)
    with pytest.raises(ValueError):
        WalkConfig(0.1, stop_tolerance=-1.0)
    with pytest.raises(ValueError):
        WalkConfig(0.1, max_steps=0)
    with pytest.raises(ValueError):
        WalkConfig(0.1, kind="hop")


def test_resolved_stop_default_scales_with_diameter():
    assert WalkConfig(0.1).resolved_stop(DISK) == pytest.approx(
        STOP_TOLERANCE_FACTOR * 2.0, abs=0
    )
    assert WalkConfig(0.1).resolved_stop(Ball((0.0, 0.0), 3.0)) == pytest.approx(
        STOP_TOLERANCE_FACTOR * 6.0, abs=0
    )
    assert WalkConfig(0.1, stop_tolerance=1e-7).resolved_stop(DISK) == 1e-7


def test_single_steps_respect_distance_cap():
    x = np.array([0.7, 0.0])
    dist = 0.3
    w = sample_unit_ball(RngStream(3, 0), 2)
    y = ball_walk_step(DISK, x, 0.2, w)
    assert np.linalg.norm(y - x) <= min(0.2, dist) + 1e-15
    v = w / np.linalg.norm(w)
    z = sphere_walk_step(DISK, x, 0.2, v)
    assert np.linalg.norm(z - x) == pytest.approx(min(0.2, dist / 2.0), rel=1e-14)


@given(st.integers(0, 2**40), st.floats(0.02, 0.5))
@settings(max_examples=25, deadline=None)
def test_exit_lands_on_boundary(seed, eps):
    cfg = WalkConfig(eps)
    batch = run_walks(DISK, (0.2, 0.1), cfg, seed, range(8))
    assert not np.any(DISK.contains(batch.exit_points))
    assert np.all(np.abs(DISK.signed_distance(batch.exit_points)) <= 1e-9)
    assert np.all(batch.steps >= 1)
    assert not np.any(batch.truncated)


def test_batch_matches_single_walks():
    cfg = WalkConfig(0.15)
    idx = [4, 0, 31]
    batch = run_walks(DISK, (0.3, -0.2), cfg, 99, idx)
    for row, k in enumerate(idx):
        single = run_walk(DISK, (0.3, -0.2), cfg, RngStream(99, k))
        assert np.array_equal(batch.exit_points[row], single.exit_point)
        assert batch.steps[row] == single.steps
        assert batch.max_excursion[row] == single.max_excursion


def test_trace_is_the_walk():
    cfg = WalkConfig(0.2)
    batch, traces = run_walks(DISK, (0.3, 0.0), cfg, 1, [0], record_trace=True)
    tr = traces[0]
    assert np.array_equal(tr[0], [0.3, 0.0])
    assert tr.shape == (batch.steps[0] + 1, 2)
    # every intermediate point is interior, steps bounded by epsilon and dist
    assert np.all(DISK.contains(tr))
    hops = np.linalg.norm(np.diff(tr, axis=0), axis=1)
    dists = DISK.distance_to_boundary(tr[:-1])
    assert np.all(hops <= np.minimum(cfg.epsilon, dists) + 1e-15)
    # exit point is the projection of the final interior position
    stop = cfg.resolved_stop(DISK)
    assert np.linalg.norm(batch.exit_points[0] - tr[-1]) <= stop + 1e-12
    assert batch.max_excursion[0] == pytest.approx(
        np.max(np.linalg.norm(tr - np.array([0.3, 0.0]), axis=1)), abs=1e-15
    )


def test_sphere_walk_steps_are_half_distance():
    cfg = WalkConfig(0.5, kind=SPHERE)
    _, traces = run_walks(DISK, (0.0, 0.0), cfg, 7, [2], record_trace=True)
    tr = traces[0]
    hops = np.linalg.norm(np.diff(tr, axis=0), axis=1)
    expected = np.minimum(cfg.epsilon, DISK.distance_to_boundary(tr[:-1]) / 2.0)
    np.testing.assert_allclose(hops, expected, rtol=1e-12)


def test_ball_and_sphere_kinds_differ():
    a = run_walks(DISK, (0.0, 0.0), WalkConfig(0.2, kind=BALL), 5, [0])
    b = run_walks(DISK, (0.0, 0.0), WalkConfig(0.2, kind=SPHERE), 5, [0])
    assert not np.array_equal(a.exit_points, b.exit_points)


def test_truncation_flags():
    cfg = WalkConfig(0.2, max_steps=3)
    batch = run_walks(DISK, (0.0, 0.0), cfg, 1, range(6))
    assert np.all(batch.truncated)
    assert np.all(batch.steps == 3)
    # truncated walks still land their report point on the boundary
    assert not np.any(DISK.contains(batch.exit_points))
    single = run_walk(DISK, (0.0, 0.0), cfg, RngStream(1, 0))
    assert single.truncated_by_cap


def test_excursion_center_shift():
    cfg = WalkConfig(0.2)
    x0 = (0.3, 0.0)
    plain = run_walks(DISK, x0, cfg, 11, range(4))
    shifted = run_walks(DISK, x0, cfg, 11, range(4), excursion_center=(1.0, 0.0))
    assert np.array_equal(plain.exit_points, shifted.exit_points)
    assert not np.array_equal(plain.max_excursion, shifted.max_excursion)
    # excursion from the start includes step 0, so it is at least 0
    assert np.all(plain.max_excursion >= 0.0)
    # from (1,0) the start point alone is already 0.7 away
    assert np.all(shifted.max_excursion >= 0.7)


def test_draw_offsets_shift_the_stream():
    cfg = WalkConfig(0.2)
    base = run_walks(DISK, (0.1, 0.1), cfg, 21, [5])
    same = run_walks(DISK, (0.1, 0.1), cfg, 21, [5], draw_offsets=0)
    moved = run_walks(DISK, (0.1, 0.1), cfg, 21, [5], draw_offsets=[30])
    assert np.array_equal(base.exit_points, same.exit_points)
    assert not np.array_equal(base.exit_points, moved.exit_points)


def test_interior_start_required():
    with pytest.raises(ValueError):
        run_walks(DISK, (2.0, 0.0), WalkConfig(0.2), 0, [0])
    with pytest.raises(ValueError):
        run_walks(DISK, (1.0, 0.0), WalkConfig(0.2), 0, [0])


def test_stopped_walks_ring():
    x0 = (0.0, 0.0)
    r, eps = 0.3, 0.05
    pts, steps = run_stopped_walks(DISK, x0, eps, r, 17, range(64))
    d = np.linalg.norm(pts, axis=1)
    assert np.all(d >= r)
    assert np.all(d < r + eps)
    assert np.all(steps >= 1)
    single = run_until_exit_ball(DISK, x0, eps, r, RngStream(17, 3))
    assert np.array_equal(single.stop_point, pts[3])
    assert single.stop_step == steps[3]


def test_stopped_walks_need_room():
    # distance to the boundary must be at least 2r so the ring is interior
    with pytest.raises(ValueError):
        run_stopped_walks(DISK, (0.6, 0.0), 0.05, 0.3, 0, range(4))
    with pytest.raises(RuntimeError):
        run_stopped_walks(DISK, (0.0, 0.0), 0.05, 0.3, 0, range(4), max_steps=2)


def test_walks_work_in_a_box():
    box = Box((0.0, 0.0, 0.0), (1.0, 2.0, 1.0))
    batch = run_walks(box, (0.5, 1.0, 0.5), WalkConfig(0.25), 8, range(16))
    assert not np.any(box.contains(batch.exit_points))
    assert np.all(np.abs(box.signed_distance(batch.exit_points)) <= 1e-9)
