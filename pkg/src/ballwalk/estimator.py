"""Monte Carlo estimators for the Dirichlet problem from simulated exits.

The solution value at an interior point is the expectation of the boundary
data at the walk's exit location.  Estimates come with standard errors, and
every sampling routine is bitwise deterministic for a given seed no matter
how the work is split across threads: walk k always consumes stream
``stream_base + k``, chunk statistics are pure functions of the chunk index,
and chunks are merged in index order.
"""

from __future__ import annotations

import abc
import concurrent.futures
import dataclasses
import math

import numpy as np
from numpy.typing import NDArray

from .geometry import Domain, as_point, _prep
from .oracle import HarmonicOracle, parse_oracle
from .walk import WalkBatch, WalkConfig, run_walks

_Array = NDArray[np.float64]

# Walks per work unit.  Statistics are accumulated per chunk and folded in
# chunk order, so results do not depend on the thread count.
_CHUNK = 8192

# Refuse estimates where more than this fraction of walks hit the step cap:
# the truncation bias is no longer negligible against the standard error.
MAX_TRUNCATED_FRACTION = 1e-3


class BoundaryData(abc.ABC):
    """Boundary values F, evaluated on batches of exit points."""

    @abc.abstractmethod
    def eval(self, points) -> float | _Array:
        """F at a point (n,) or batch (m, n)."""


class Constant(BoundaryData):
    def __init__(self, value: float):
        self.value = float(value)

    def __repr__(self) -> str:
        return f"Constant({self.value})"

    def eval(self, points) -> float | _Array:
        a = np.asarray(points, dtype=np.float64)
        if a.ndim == 1:
            return self.value
        return np.full(a.shape[0], self.value)


class Coordinate(BoundaryData):
    """F(x) = x_k with 1-based index k."""

    def __init__(self, index: int):
        if int(index) != index or index < 1:
            raise ValueError(f"coordinate index is 1-based, got {index!r}")
        self.index = int(index)

    def __repr__(self) -> str:
        return f"Coordinate({self.index})"

    def eval(self, points) -> float | _Array:
        a = np.asarray(points, dtype=np.float64)
        k = self.index - 1
        if a.ndim == 1:
            if k >= a.shape[0]:
                raise ValueError(f"coordinate {self.index} out of range for dimension {a.shape[0]}")
            return float(a[k])
        if k >= a.shape[1]:
            raise ValueError(f"coordinate {self.index} out of range for dimension {a.shape[1]}")
        return a[:, k].copy()


class DistanceTo(BoundaryData):
    """F(x) = |x - p|."""

    def __init__(self, point):
        self.point = as_point(point)

    def __repr__(self) -> str:
        return f"DistanceTo({self.point.tolist()})"

    def eval(self, points) -> float | _Array:
        pts, single = _prep(points, self.point.shape[0])
        d = np.linalg.norm(pts - self.point, axis=1)
        return float(d[0]) if single else d


class HarmonicTrace(BoundaryData):
    """Boundary restriction of a known harmonic function.

    With this data the estimator has a closed-form target: the harmonic
    function's own value at the start point.
    """

    def __init__(self, oracle: HarmonicOracle):
        if not isinstance(oracle, HarmonicOracle):
            raise TypeError("HarmonicTrace wraps a HarmonicOracle")
        self.oracle = oracle

    def __repr__(self) -> str:
        return f"HarmonicTrace({self.oracle!r})"

    def eval(self, points) -> float | _Array:
        return self.oracle.eval(points)


class Tabulated(BoundaryData):
    """Finite boundary samples, extended continuously via tietze_extend.

    Exit points almost never coincide with a sample point, so evaluation off
    the sample set uses the Hausdorff extension formula (see tietze_extend)
    rather than nearest-neighbor snapping.
    """

    def __init__(self, points, values):
        pts = np.array(points, dtype=np.float64)
        vals = np.array(values, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValueError("tabulated data needs a (m, n) array of sample points")
        if vals.shape != (pts.shape[0],):
            raise ValueError("need one value per sample point")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(vals))):
            raise ValueError("tabulated samples must be finite")
        pts.setflags(write=False)
        vals.setflags(write=False)
        self.points = pts
        self.values = vals

    def __repr__(self) -> str:
        return f"Tabulated({self.points.shape[0]} samples, dim={self.points.shape[1]})"

    def eval(self, points) -> float | _Array:
        return tietze_extend(self.points, self.values, points)


def parse_boundary_data(text: str) -> BoundaryData:
    """Parse boundary data: constant(c), coordinate(k), distance_to(p...),
    tabulated(file.csv), or any oracle expression (wrapped as its trace)."""
    if not isinstance(text, str):
        raise TypeError("boundary data specification must be a string")
    s = text.strip()
    open_at = s.find("(")
    if open_at <= 0 or not s.endswith(")"):
        raise ValueError(f"malformed boundary data expression {text!r}")
    name = s[:open_at].strip()
    body = s[open_at + 1:-1].strip()
    if name == "constant":
        return Constant(float(body))
    if name == "coordinate":
        return Coordinate(int(body))
    if name == "distance_to":
        return DistanceTo([float(v) for v in body.split(",")])
    if name == "tabulated":
        if not body:
            raise ValueError("tabulated(...) needs a CSV path of x1,...,xn,value rows")
        rows = np.loadtxt(body, delimiter=",", ndmin=2)
        if rows.shape[1] < 2:
            raise ValueError("tabulated CSV rows must be x1,...,xn,value")
        return Tabulated(rows[:, :-1], rows[:, -1])
    return HarmonicTrace(parse_oracle(text))


@dataclasses.dataclass(frozen=True)
class Estimate:
    """A sample mean with its uncertainty.

    ``n`` counts the walks that actually exited; ``truncated_count`` walks
    hit the step cap and are excluded from the average.
    """

    mean: float
    stderr: float
    n: int
    truncated_count: int = 0

    @property
    def ci95(self) -> tuple[float, float]:
        half = 1.96 * self.stderr
        return (self.mean - half, self.mean + half)


@dataclasses.dataclass(frozen=True)
class FieldResult:
    """Estimates on a grid of interior points.

    Rows of ``points`` outside the domain are skipped (NaN statistics); their
    indices are listed in ``skipped``.
    """

    points: _Array
    means: _Array
    stderrs: _Array
    counts: NDArray[np.int64]
    truncated: NDArray[np.int64]
    skipped: tuple[int, ...]
    n_walks: int

    def estimate_at(self, j: int) -> Estimate | None:
        if j in self.skipped:
            return None
        return Estimate(float(self.means[j]), float(self.stderrs[j]),
                        int(self.counts[j]), int(self.truncated[j]))


def _chunk_ranges(n: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + _CHUNK, n)) for lo in range(0, n, _CHUNK)]


def _map_chunks(worker, n: int, threads: int) -> list:
    """Run worker(lo, hi) over fixed chunks, returning results in chunk order."""
    ranges = _chunk_ranges(n)
    if threads <= 1 or len(ranges) <= 1:
        return [worker(lo, hi) for lo, hi in ranges]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(worker, lo, hi) for lo, hi in ranges]
        return [f.result() for f in futures]


def _merge_moments(stats: list[tuple[int, float, float]]) -> tuple[int, float, float]:
    """Fold (count, mean, M2) chunk statistics in list order."""
    n_acc, mean_acc, m2_acc = 0, 0.0, 0.0
    for n_b, mean_b, m2_b in stats:
        if n_b == 0:
            continue
        if n_acc == 0:
            n_acc, mean_acc, m2_acc = n_b, mean_b, m2_b
            continue
        n = n_acc + n_b
        delta = mean_b - mean_acc
        mean_acc = mean_acc + delta * (n_b / n)
        m2_acc = m2_acc + m2_b + delta * delta * (n_acc * (n_b / n))
        n_acc = n
    return n_acc, mean_acc, m2_acc


def _chunk_moments(values: _Array) -> tuple[int, float, float]:
    """Two-pass (count, mean, M2) for one chunk of exit values."""
    n = values.shape[0]
    if n == 0:
        return 0, 0.0, 0.0
    mean = float(values.mean())
    d = values - mean
    return n, mean, float(d @ d)


def _require_sane_truncation(truncated_count: int, n_walks: int) -> None:
    if truncated_count > MAX_TRUNCATED_FRACTION * n_walks:
        raise RuntimeError(
            f"{truncated_count} of {n_walks} walks hit the step cap "
            f"(> {MAX_TRUNCATED_FRACTION:.1%}); raise max_steps or epsilon")


def exit_sample(
    domain: Domain,
    x0,
    config: WalkConfig,
    master_seed: int,
    n_walks: int,
    *,
    stream_base: int = 0,
    threads: int = 1,
) -> WalkBatch:
    """Simulate n_walks exits from x0; walk k uses stream stream_base + k."""
    n_walks = _check_n_walks(n_walks)
    threads = _check_threads(threads)

    def worker(lo: int, hi: int) -> WalkBatch:
        idx = stream_base + np.arange(lo, hi, dtype=np.int64)
        return run_walks(domain, x0, config, master_seed, idx)

    parts = _map_chunks(worker, n_walks, threads)
    return WalkBatch(
        exit_points=np.concatenate([p.exit_points for p in parts], axis=0),
        steps=np.concatenate([p.steps for p in parts]),
        truncated=np.concatenate([p.truncated for p in parts]),
        max_excursion=np.concatenate([p.max_excursion for p in parts]),
    )


def estimate_value(
    domain: Domain,
    data: BoundaryData,
    x0,
    config: WalkConfig,
    master_seed: int,
    n_walks: int,
    *,
    stream_base: int = 0,
    threads: int = 1,
) -> Estimate:
    """Estimate the solution at x0 as the mean of F over simulated exits."""
    n_walks = _check_n_walks(n_walks, minimum=2)
    threads = _check_threads(threads)

    def worker(lo: int, hi: int) -> tuple[tuple[int, float, float], int]:
        idx = stream_base + np.arange(lo, hi, dtype=np.int64)
        batch = run_walks(domain, x0, config, master_seed, idx)
        ok = ~batch.truncated
        values = np.asarray(data.eval(batch.exit_points[ok]), dtype=np.float64)
        return _chunk_moments(values), int(batch.truncated.sum())

    parts = _map_chunks(worker, n_walks, threads)
    truncated_count = sum(t for _, t in parts)
    _require_sane_truncation(truncated_count, n_walks)
    n_used, mean, m2 = _merge_moments([s for s, _ in parts])
    if n_used == 0:
        raise RuntimeError("all walks were truncated; nothing to average")
    stderr = math.sqrt(m2 / (n_used - 1) / n_used) if n_used > 1 else math.nan
    return Estimate(mean=mean, stderr=stderr, n=n_used, truncated_count=truncated_count)


def estimate_field(
    domain: Domain,
    data: BoundaryData,
    points,
    config: WalkConfig,
    master_seed: int,
    n_walks: int,
    *,
    threads: int = 1,
) -> FieldResult:
    """Estimate the solution at many points; point j owns walk streams
    [j * n_walks, (j + 1) * n_walks), so adding or skipping points never
    shifts another point's randomness."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError("points must be a (m, n) array")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    n_walks = _check_n_walks(n_walks)
    threads = _check_threads(threads)

    m = pts.shape[0]
    inside = domain.contains(pts)
    if m == 1:
        inside = np.asarray([inside])
    means = np.full(m, np.nan)
    stderrs = np.full(m, np.nan)
    counts = np.zeros(m, dtype=np.int64)
    truncated = np.zeros(m, dtype=np.int64)
    skipped = tuple(int(j) for j in np.flatnonzero(~inside))
    for j in range(m):
        if not inside[j]:
            continue
        est = estimate_value(domain, data, pts[j], config, master_seed, n_walks,
                             stream_base=j * n_walks, threads=threads)
        means[j] = est.mean
        stderrs[j] = est.stderr
        counts[j] = est.n
        truncated[j] = est.truncated_count
    for a in (means, stderrs, counts, truncated):
        a.setflags(write=False)
    out_pts = pts.copy()
    out_pts.setflags(write=False)
    return FieldResult(points=out_pts, means=means, stderrs=stderrs, counts=counts,
                       truncated=truncated, skipped=skipped, n_walks=n_walks)


def tietze_extend(anchor_points, anchor_values, x) -> float | _Array:
    """Extend values on a finite anchor set continuously to all other points.

    Off the anchor set the extension is
        min over anchors y of  F(y) + |x - y| / dist(x, A) - 1,
    which reproduces F on A in the limit and is continuous everywhere.  On an
    anchor the anchor's own value is returned.  The "- 1" is kept inside the
    minimum, matching the classical (Hausdorff) formula verbatim even though
    the constant factors out; variants of the formula move it outside.
    """
    pts = np.array(anchor_points, dtype=np.float64)
    vals = np.array(anchor_values, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError("anchor_points must be a (m, n) array")
    if vals.shape != (pts.shape[0],):
        raise ValueError("need one value per anchor point")
    if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(vals))):
        raise ValueError("anchors must be finite")
    q, single = _prep(x, pts.shape[1])
    # (len(q), m) pairwise distances
    d = np.linalg.norm(q[:, None, :] - pts[None, :, :], axis=2)
    dist_a = d.min(axis=1)
    on_anchor = dist_a == 0.0
    out = np.empty(q.shape[0])
    off = ~on_anchor
    if np.any(off):
        cand = vals[None, :] + d[off] / dist_a[off, None] - 1.0
        out[off] = cand.min(axis=1)
    if np.any(on_anchor):
        out[on_anchor] = vals[d[on_anchor].argmin(axis=1)]
    return float(out[0]) if single else out


def _check_n_walks(n_walks, minimum: int = 1) -> int:
    if int(n_walks) != n_walks or n_walks < minimum:
        raise ValueError(f"n_walks must be an integer >= {minimum}, got {n_walks!r}")
    return int(n_walks)


def _check_threads(threads) -> int:
    if int(threads) != threads or threads < 1:
        raise ValueError(f"threads must be a positive integer, got {threads!r}")
    return int(threads)
