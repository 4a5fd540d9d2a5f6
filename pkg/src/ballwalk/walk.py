"""Ball-walk and sphere-walk processes over domain oracles.

One ball-walk step from x moves by min(epsilon, dist(x)) * w with w uniform
in the unit ball; the sphere walk moves by min(epsilon, dist(x) / 2) * w with
w uniform on the unit sphere.  A walk terminates when the boundary distance
drops below the stop tolerance and reports the nearest-boundary projection
as its exit point; a step cap marks the outcome truncated instead of raising.

The batch runner advances many walks in lockstep with vectorized numpy ops.
Each walk consumes draws addressed by (master_seed, stream_index, step), so
outcomes are independent of batch composition: running a walk alone, in a
chunk, or under any thread count is bitwise identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .geometry import Domain, _prep
from .stochastic import (
    RngStream,
    _as_u64,
    _stream_base,
    _unit_ball_from_base,
    _unit_sphere_from_base,
    draws_per_ball,
    draws_per_sphere,
)

_Array = NDArray[np.float64]

BALL = "ball"
SPHERE = "sphere"
# Default stop tolerance, as a fraction of the domain diameter.
STOP_TOLERANCE_FACTOR = 1e-4


@dataclass(frozen=True)
class WalkConfig:
    """Walk parameters: step scale, termination tolerance, cap, and kind.

    ``stop_tolerance`` defaults to 1e-4 times the domain diameter, resolved
    when a walk runs; it stays configurable because near an irregular
    boundary point the interplay of the tolerance and the geometry is itself
    the object of study.
    """

    epsilon: float
    stop_tolerance: float | None = None
    max_steps: int = 10_000_000
    kind: str = BALL

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.stop_tolerance is not None and not 0.0 < self.stop_tolerance < self.epsilon:
            raise ValueError(
                f"stop_tolerance must lie in (0, epsilon), got {self.stop_tolerance}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be positive, got {self.max_steps}")
        if self.kind not in (BALL, SPHERE):
            raise ValueError(f"kind must be '{BALL}' or '{SPHERE}', got {self.kind!r}")

    def resolved_stop(self, domain: Domain) -> float:
        """The stop tolerance for this domain, applying the diameter default."""
        tol = self.stop_tolerance
        if tol is None:
            tol = STOP_TOLERANCE_FACTOR * domain.diameter()
        if not 0.0 < tol < self.epsilon:
            raise ValueError(
                f"resolved stop_tolerance {tol} must lie in (0, epsilon={self.epsilon})")
        return tol


@dataclass(frozen=True)
class WalkOutcome:
    """Result of one walk: boundary exit, step count, cap flag, path spread."""

    exit_point: _Array
    steps: int
    truncated_by_cap: bool
    max_excursion: float
    trace: _Array | None = None


@dataclass(frozen=True)
class StoppedOutcome:
    """Result of a walk stopped on first departure from a reference ball."""

    stop_point: _Array
    stop_step: int


@dataclass(frozen=True)
class WalkBatch:
    """Columnar outcomes of a batch of walks (one row per stream index)."""

    exit_points: _Array
    steps: NDArray[np.int64]
    truncated: NDArray[np.bool_]
    max_excursion: _Array


def ball_walk_step(domain: Domain, x, epsilon: float, w) -> _Array:
    """One ball-walk displacement: x + min(epsilon, dist(x)) * w."""
    pts, single = _prep(x, domain.dim)
    wv, wsingle = _prep(w, domain.dim)
    if single != wsingle:
        raise ValueError("x and w must have matching shapes")
    d = -domain._sd(pts)
    if np.any(d <= 0.0):
        raise ValueError("ball_walk_step requires interior points")
    out = pts + np.minimum(epsilon, d)[:, None] * wv
    return out[0] if single else out


def sphere_walk_step(domain: Domain, x, epsilon: float, w) -> _Array:
    """One sphere-walk displacement: x + min(epsilon, dist(x) / 2) * w."""
    pts, single = _prep(x, domain.dim)
    wv, wsingle = _prep(w, domain.dim)
    if single != wsingle:
        raise ValueError("x and w must have matching shapes")
    d = -domain._sd(pts)
    if np.any(d <= 0.0):
        raise ValueError("sphere_walk_step requires interior points")
    out = pts + np.minimum(epsilon, 0.5 * d)[:, None] * wv
    return out[0] if single else out


def run_walks(
    domain: Domain,
    x0,
    config: WalkConfig,
    master_seed: int,
    stream_indices,
    *,
    draw_offsets=0,
    excursion_center=None,
    record_trace: bool = False,
) -> WalkBatch | tuple[WalkBatch, list[_Array]]:
    """Advance one walk per stream index until exit or cap; see WalkBatch.

    ``excursion_center`` changes the reference point of max_excursion (the
    escape-probability estimator measures spread around a boundary point
    rather than around x0).  With ``record_trace`` the full position history
    is returned as one (steps+1, n) array per walk; use small batches.
    """
    x0p, _ = _prep(x0, domain.dim)
    x0v = x0p[0]
    if not domain.contains(x0v):
        raise ValueError("walks must start inside the open domain")
    idx = _as_u64(stream_indices)
    m = idx.shape[0]
    n = domain.dim
    tol = config.resolved_stop(domain)
    eps = config.epsilon
    sphere = config.kind == SPHERE
    per = draws_per_sphere(n) if sphere else draws_per_ball(n)

    bases = _stream_base(master_seed, idx)
    offsets = np.broadcast_to(_as_u64(draw_offsets), (m,))
    ref = x0v if excursion_center is None else _prep(excursion_center, n)[0][0]

    pos = np.broadcast_to(x0v, (m, n)).copy()
    exit_points = np.empty((m, n))
    steps = np.zeros(m, dtype=np.int64)
    truncated = np.zeros(m, dtype=bool)
    excursion = np.full(m, float(np.linalg.norm(x0v - ref)))
    traces: list[list[_Array]] = [[x0v.copy()] for _ in range(m)] if record_trace else []

    alive = np.arange(m)
    t = 0
    while alive.size:
        cur = pos[alive]
        dist = -domain._sd(cur)
        np.maximum(dist, 0.0, out=dist)
        done = dist < tol
        if np.any(done):
            rows = alive[done]
            exit_points[rows] = domain._project(pos[rows])
            keep = ~done
            alive = alive[keep]
            cur = cur[keep]
            dist = dist[keep]
            if alive.size == 0:
                break
        if t >= config.max_steps:
            truncated[alive] = True
            exit_points[alive] = domain._project(pos[alive])
            break
        draw_start = offsets[alive] + np.uint64(t * per)
        if sphere:
            w = _unit_sphere_from_base(bases[alive], draw_start, n)
            radius = np.minimum(eps, 0.5 * dist)
        else:
            w = _unit_ball_from_base(bases[alive], draw_start, n)
            radius = np.minimum(eps, dist)
        cur = cur + radius[:, None] * w
        pos[alive] = cur
        steps[alive] = t + 1
        excursion[alive] = np.maximum(excursion[alive], np.linalg.norm(cur - ref, axis=1))
        if record_trace:
            for k, row in enumerate(alive):
                traces[row].append(cur[k].copy())
        t += 1

    batch = WalkBatch(exit_points, steps, truncated, excursion)
    if record_trace:
        return batch, [np.asarray(tr) for tr in traces]
    return batch


def run_walk(domain: Domain, x0, config: WalkConfig, stream: RngStream,
             *, record_trace: bool = False) -> WalkOutcome:
    """Run a single walk on its stream; deterministic in (stream, inputs)."""
    result = run_walks(
        domain, x0, config, stream.master_seed, [stream.stream_index],
        draw_offsets=stream.offset, record_trace=record_trace,
    )
    if record_trace:
        batch, traces = result
        trace = traces[0]
    else:
        batch, trace = result, None
    return WalkOutcome(
        exit_point=batch.exit_points[0],
        steps=int(batch.steps[0]),
        truncated_by_cap=bool(batch.truncated[0]),
        max_excursion=float(batch.max_excursion[0]),
        trace=trace,
    )


def run_stopped_walks(
    domain: Domain,
    x0,
    epsilon: float,
    r: float,
    master_seed: int,
    stream_indices,
    *,
    max_steps: int = 10_000_000,
) -> tuple[_Array, NDArray[np.int64]]:
    """Ball walks from x0 stopped on first departure from the ball of radius r.

    Requires the concentric ball of radius 2r around x0 to stay inside the
    domain (certified through the distance oracle, which never
    overestimates).  Returns stop points and stop steps; raises if any walk
    exhausts the step cap.
    """
    x0p, _ = _prep(x0, domain.dim)
    x0v = x0p[0]
    r = float(r)
    if r <= 0.0:
        raise ValueError(f"r must be positive, got {r}")
    if not domain.contains(x0v):
        raise ValueError("x0 must lie inside the open domain")
    if domain.distance_to_boundary(x0v) < 2.0 * r:
        raise ValueError("the ball of radius 2r around x0 must stay inside the domain")
    idx = _as_u64(stream_indices)
    m = idx.shape[0]
    n = domain.dim
    per = draws_per_ball(n)
    bases = _stream_base(master_seed, idx)

    pos = np.broadcast_to(x0v, (m, n)).copy()
    stop_points = np.empty((m, n))
    stop_steps = np.zeros(m, dtype=np.int64)
    alive = np.arange(m)
    t = 0
    while alive.size:
        if t >= max_steps:
            raise RuntimeError(f"{alive.size} stopped walks exhausted the step cap {max_steps}")
        cur = pos[alive]
        dist = -domain._sd(cur)
        np.maximum(dist, 0.0, out=dist)
        draw_start = np.broadcast_to(np.uint64(t * per), (alive.size,))
        w = _unit_ball_from_base(bases[alive], draw_start, n)
        cur = cur + np.minimum(epsilon, dist)[:, None] * w
        pos[alive] = cur
        t += 1
        out = np.linalg.norm(cur - x0v, axis=1) >= r
        if np.any(out):
            rows = alive[out]
            stop_points[rows] = cur[out]
            stop_steps[rows] = t
            alive = alive[~out]
    return stop_points, stop_steps


def run_until_exit_ball(domain: Domain, x0, epsilon: float, r: float,
                        stream: RngStream, *, max_steps: int = 10_000_000) -> StoppedOutcome:
    """Single stopped walk; see run_stopped_walks."""
    points, steps = run_stopped_walks(
        domain, x0, epsilon, r, stream.master_seed, [stream.stream_index], max_steps=max_steps)
    return StoppedOutcome(stop_point=points[0], stop_step=int(steps[0]))
