"""Estimator invariants.

The two load-bearing properties here are exactness on constants and
bitwise invariance of the reduction under any thread count; everything
else is cross-checks against plain numpy statistics on the same exits.
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballwalk import (
    Ball,
    Box,
    Constant,
    Coordinate,
    DistanceTo,
    Estimate,
    HarmonicQuadratic,
    HarmonicTrace,
    Linear,
    Tabulated,
    WalkConfig,
    estimate_field,
    estimate_value,
    exit_sample,
    parse_boundary_data,
    tietze_extend,
)

DISK = Ball((0.0, 0.0), 1.0)
CFG = WalkConfig(0.2)


def test_boundary_data_eval():
    pts = np.array([[0.3, 0.4], [1.0, 0.0]])
    np.testing.assert_array_equal(Constant(5.0).eval(pts), [5.0, 5.0])
    np.testing.assert_array_equal(Coordinate(1).eval(pts), [0.3, 1.0])
    np.testing.assert_array_equal(Coordinate(2).eval(pts), [0.4, 0.0])
    np.testing.assert_allclose(DistanceTo((0.0, 0.0)).eval(pts), [0.5, 1.0], rtol=1e-15)
    trace = HarmonicTrace(HarmonicQuadratic([[1.0, 0.0], [0.0, -1.0]]))
    np.testing.assert_allclose(trace.eval(pts), [-0.07, 1.0], atol=1e-15)


def test_boundary_data_validation():
    with pytest.raises(ValueError):
        Coordinate(0)  # indices are 1-based
    with pytest.raises(TypeError):
        HarmonicTrace(lambda x: x)
    pts = np.array([[0.1, 0.2]])
    with pytest.raises(ValueError):
        Coordinate(3).eval(pts)


def test_parse_boundary_data():
    assert isinstance(parse_boundary_data("constant(3)"), Constant)
    assert isinstance(parse_boundary_data("coordinate(2)"), Coordinate)
    assert isinstance(parse_boundary_data("distance_to(0,0)"), DistanceTo)
    fallback = parse_boundary_data("quad(1,-1)")
    assert isinstance(fallback, HarmonicTrace)
    with pytest.raises(ValueError):
        parse_boundary_data("constant()")


def test_estimate_ci95():
    est = Estimate(1.0, 0.1, 400)
    lo, hi = est.ci95
    assert lo == pytest.approx(1.0 - 1.96 * 0.1, abs=1e-12)
    assert hi == pytest.approx(1.0 + 1.96 * 0.1, abs=1e-12)


def test_constant_data_is_exact():
    est = estimate_value(DISK, Constant(3.25), (0.1, -0.2), CFG, 7, 500)
    assert est.mean == 3.25
    assert est.stderr == 0.0
    assert est.n == 500
    assert est.truncated_count == 0


def test_needs_two_walks():
    with pytest.raises(ValueError):
        estimate_value(DISK, Constant(0.0), (0.0, 0.0), CFG, 0, 1)


def test_matches_plain_numpy_on_the_same_exits():
    n = 5000
    batch = exit_sample(DISK, (0.3, 0.1), CFG, 11, n)
    values = Coordinate(1).eval(batch.exit_points)
    est = estimate_value(DISK, Coordinate(1), (0.3, 0.1), CFG, 11, n)
    assert est.mean == pytest.approx(values.mean(), abs=1e-13)
    assert est.stderr == pytest.approx(values.std(ddof=1) / np.sqrt(n), rel=1e-10)
    assert est.n == n


def test_estimator_is_linear_in_the_data():
    args = (DISK, (0.25, -0.1), CFG, 13, 2000)
    coord = estimate_value(args[0], Coordinate(1), *args[1:])
    combo = estimate_value(args[0], HarmonicTrace(Linear((2.0, 0.0), -0.5)), *args[1:])
    assert combo.mean == pytest.approx(2.0 * coord.mean - 0.5, abs=1e-12)


def test_thread_count_never_changes_results():
    ref = estimate_value(DISK, Coordinate(2), (0.1, 0.2), CFG, 5, 3000, threads=1)
    for threads in (2, 4, 13):
        alt = estimate_value(DISK, Coordinate(2), (0.1, 0.2), CFG, 5, 3000, threads=threads)
        assert alt.mean == ref.mean
        assert alt.stderr == ref.stderr
        assert alt.n == ref.n


def test_stream_base_moves_the_sample():
    a = estimate_value(DISK, Coordinate(1), (0.0, 0.0), CFG, 5, 200, stream_base=0)
    b = estimate_value(DISK, Coordinate(1), (0.0, 0.0), CFG, 5, 200, stream_base=10**6)
    assert a.mean != b.mean


def test_mean_respects_data_bounds():
    est = estimate_value(DISK, Coordinate(1), (0.0, 0.0), CFG, 3, 500)
    assert -1.0 <= est.mean <= 1.0
    assert est.stderr > 0.0


def test_exit_sample_matches_run_walks_streams():
    from ballwalk import run_walks

    batch = exit_sample(DISK, (0.2, 0.2), CFG, 9, 300, stream_base=40)
    direct = run_walks(DISK, (0.2, 0.2), CFG, 9, range(40, 340))
    np.testing.assert_array_equal(batch.exit_points, direct.exit_points)
    np.testing.assert_array_equal(batch.steps, direct.steps)


def test_truncation_beyond_budget_raises():
    cfg = WalkConfig(0.05, max_steps=5)
    with pytest.raises(RuntimeError, match="step cap"):
        estimate_value(DISK, Constant(1.0), (0.0, 0.0), cfg, 0, 100)


def test_field_rows_match_estimate_value():
    pts = [(0.0, 0.0), (0.3, 0.2)]
    n = 400
    field = estimate_field(DISK, Coordinate(1), pts, CFG, 21, n)
    for j, x in enumerate(pts):
        direct = estimate_value(DISK, Coordinate(1), x, CFG, 21, n, stream_base=j * n)
        assert field.means[j] == direct.mean
        assert field.stderrs[j] == direct.stderr
        est = field.estimate_at(j)
        assert est is not None and est.mean == direct.mean
    assert field.skipped == ()
    assert field.n_walks == n


def test_field_skips_exterior_points():
    pts = [(0.0, 0.0), (2.0, 0.0), (0.1, 0.1)]
    field = estimate_field(DISK, Constant(1.0), pts, CFG, 3, 50)
    assert field.skipped == (1,)
    assert np.isnan(field.means[1]) and np.isnan(field.stderrs[1])
    assert field.counts[1] == 0
    assert field.estimate_at(1) is None
    assert field.means[0] == 1.0 and field.means[2] == 1.0


def test_field_threads_invariant():
    pts = [(0.0, 0.0), (0.4, -0.3), (-0.2, 0.5)]
    a = estimate_field(DISK, Coordinate(2), pts, CFG, 17, 600, threads=1)
    b = estimate_field(DISK, Coordinate(2), pts, CFG, 17, 600, threads=4)
    np.testing.assert_array_equal(a.means, b.means)
    np.testing.assert_array_equal(a.stderrs, b.stderrs)


# ---------------------------------------------------------------------------
# tietze extension


ANCHORS = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])
VALUES = np.array([2.0, -1.0, 0.5])


def test_tietze_exact_on_anchors():
    for p, v in zip(ANCHORS, VALUES):
        assert tietze_extend(ANCHORS, VALUES, p) == v


def test_tietze_vectorized():
    out = tietze_extend(ANCHORS, VALUES, np.array([[0.0, 0.0], [1.0, 0.0]]))
    assert out.shape == (2,)
    assert out[1] == 2.0


@given(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
@settings(max_examples=200)
def test_tietze_bounds(x, y):
    p = np.array([x, y])
    v = float(tietze_extend(ANCHORS, VALUES, p))
    d = np.linalg.norm(ANCHORS - p, axis=1)
    nearest_value = VALUES[np.argmin(d)]
    assert VALUES.min() - 1e-12 <= v <= nearest_value + 1e-12


def test_tabulated_uses_the_extension():
    data = Tabulated(ANCHORS, VALUES)
    pts = np.array([[0.2, -0.4], [0.0, 1.0]])
    expected = tietze_extend(ANCHORS, VALUES, pts)
    np.testing.assert_array_equal(data.eval(pts), expected)


def test_tabulated_in_estimate():
    # two anchors on the unit circle; the estimate must stay within range
    sq = Box((-1.0, -1.0), (1.0, 1.0))
    data = Tabulated(np.array([[1.0, 0.0], [-1.0, 0.0]]), np.array([1.0, 0.0]))
    est = estimate_value(sq, data, (0.0, 0.0), CFG, 2, 300)
    assert 0.0 <= est.mean <= 1.0
