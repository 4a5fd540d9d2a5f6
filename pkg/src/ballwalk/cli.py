"""Command-line front end: experiment orchestration with deterministic reports.

Commands: solve, field, exitdist, regularity, escape, cone, check-mvp,
check-avg, irregularity.  Options come from flags and/or a flat JSON config
file (flags win); unknown config keys are rejected.  Exit codes: 0 success,
2 a statistical check failed its threshold, 1 operational error.  Reports
embed the resolved semantic configuration (execution-only keys such as
threads and output paths are excluded), so identical experiments give
byte-identical reports regardless of worker count.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import analysis, reporting
from .estimator import estimate_field, estimate_value, exit_sample, parse_boundary_data
from .geometry import Domain, parse_domain
from .oracle import PROBE_FUNCTIONS, parse_oracle
from .walk import WalkConfig, run_walks

COMMANDS = ("solve", "field", "exitdist", "regularity", "escape", "cone",
            "check-mvp", "check-avg", "irregularity")

_EXECUTION_KEYS = {"threads", "out", "trace"}

_DEFAULTS = {
    "max_steps": 10_000_000,
    "walks": 10_000,
    "threads": 1,
    "format": "json",
    "svg": False,
    "probes": 5,
    "n_outer": 16,
    "n_inner": 2000,
    "n_samples": 100_000,
    "sigmas": 4.0,
}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Fully resolved run description; equal configs give equal reports."""

    command: str
    domain: str | None = None
    data: str | None = None
    eps: float | None = None
    stop_tol: float | None = None
    max_steps: int = 10_000_000
    walks: int = 10_000
    seed: int = 0
    threads: int = 1
    out: str | None = None
    format: str = "json"
    svg: bool = False
    trace: str | None = None
    x0: tuple[float, ...] | None = None
    y0: tuple[float, ...] | None = None
    grid: tuple[int, ...] | None = None
    delta: float | None = None
    delta_hat: float | None = None
    probes: int = 5
    n_outer: int = 16
    n_inner: int = 2000
    n_samples: int = 100_000
    distances: tuple[float, ...] | None = None
    u: str | None = None
    dim: int | None = None
    R: float | None = None
    threshold: float | None = None
    sigmas: float = 4.0


_FIELD_NAMES = {f.name for f in dataclasses.fields(RunConfig)}


def _float_tuple(value) -> tuple[float, ...]:
    if isinstance(value, str):
        parts = [p for p in value.split(",") if p.strip()]
        return tuple(float(p) for p in parts)
    return tuple(float(v) for v in value)


def _int_tuple(value) -> tuple[int, ...]:
    if isinstance(value, str):
        parts = [p for p in value.split(",") if p.strip()]
        return tuple(int(p) for p in parts)
    return tuple(int(v) for v in value)


_COERCERS = {
    "command": str,
    "domain": str,
    "data": str,
    "eps": float,
    "stop_tol": float,
    "max_steps": int,
    "walks": int,
    "seed": int,
    "threads": int,
    "out": str,
    "format": str,
    "svg": bool,
    "trace": str,
    "x0": _float_tuple,
    "y0": _float_tuple,
    "grid": _int_tuple,
    "delta": float,
    "delta_hat": float,
    "probes": int,
    "n_outer": int,
    "n_inner": int,
    "n_samples": int,
    "distances": _float_tuple,
    "u": str,
    "dim": int,
    "R": float,
    "threshold": float,
    "sigmas": float,
}


def config_from_dict(raw: dict) -> RunConfig:
    """Build a RunConfig from a flat dict (e.g. a parsed JSON config file)."""
    return _resolve_config(dict(raw), {})


def _resolve_config(file_values: dict, flag_values: dict) -> RunConfig:
    for key in file_values:
        if key not in _FIELD_NAMES:
            raise ValueError(f"unknown config key {key!r}")
    merged = dict(file_values)
    merged.update(flag_values)
    command = merged.pop("command", None)
    if command not in COMMANDS:
        raise ValueError(f"command must be one of {', '.join(COMMANDS)}; got {command!r}")
    values: dict = {"command": command}
    for key, value in merged.items():
        if value is None:
            continue
        values[key] = _COERCERS[key](value)
    for key, default in _DEFAULTS.items():
        values.setdefault(key, default)
    if "seed" not in values:
        env = os.environ.get("BALLWALK_SEED")
        values["seed"] = int(env) if env else 0
    if values["format"] not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {values['format']!r}")
    if values["threads"] < 1:
        raise ValueError("threads must be a positive integer")
    return RunConfig(**values)


def emit_config(config: RunConfig) -> str:
    """Serialize a config as the flat JSON accepted back by config_from_dict."""
    payload = {k: v for k, v in dataclasses.asdict(config).items() if v is not None}
    return reporting.json_report(payload)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ballwalk",
        description="Monte Carlo Dirichlet solver and boundary-regularity diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat JSON config file; flags override it")
        p.add_argument("--domain", help="domain expression, e.g. ball(0,0;1)")
        p.add_argument("--data", help="boundary data, e.g. coordinate(1) or quad(1,-1)")
        p.add_argument("--eps", type=float, help="step radius, in (0,1)")
        p.add_argument("--stop-tol", dest="stop_tol", type=float,
                       help="termination distance (default 1e-4 * diameter)")
        p.add_argument("--max-steps", dest="max_steps", type=int)
        p.add_argument("--walks", type=int, help="walks per estimate")
        p.add_argument("--seed", type=int, help="master seed (env BALLWALK_SEED as fallback)")
        p.add_argument("--threads", type=int)
        p.add_argument("--out", help="report file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--x0", help="point, e.g. 0.3,0.4")
        p.add_argument("--y0", help="boundary point, e.g. 1,0")
        p.add_argument("--sigmas", type=float, help="threshold in standard errors (default 4)")
        if name == "solve":
            p.add_argument("--trace", help="write the first walk's trajectory CSV here")
        if name == "field":
            p.add_argument("--grid", help="cells per axis over the bounding box, e.g. 20,20")
            p.add_argument("--svg", action="store_true", default=None,
                           help="also write a heatmap next to --out (2-D only)")
        if name in ("regularity", "escape"):
            p.add_argument("--delta", type=float)
        if name == "regularity":
            p.add_argument("--delta-hat", dest="delta_hat", type=float)
            p.add_argument("--probes", type=int)
            p.add_argument("--threshold", type=float,
                           help="fail (exit 2) when min probe probability is below this")
        if name == "escape":
            p.add_argument("--R", type=float,
                           help="exterior-cone ratio; enables the theta0 bound check")
        if name == "cone":
            p.add_argument("--dim", type=int)
            p.add_argument("--R", type=float)
        if name == "check-mvp":
            p.add_argument("--n-outer", dest="n_outer", type=int)
            p.add_argument("--n-inner", dest="n_inner", type=int)
        if name == "check-avg":
            p.add_argument("--u", help="test function: squared_norm, first_coord_quartic, "
                                       "or an oracle expression")
            p.add_argument("--n-samples", dest="n_samples", type=int)
        if name == "irregularity":
            p.add_argument("--distances", help="start distances from y0, e.g. 0.01,0.001")
    return parser


def parse_config(argv) -> RunConfig:
    """Parse CLI arguments plus optional --config file into a RunConfig."""
    args = vars(_build_parser().parse_args(argv))
    config_path = args.pop("config", None)
    flag_values = {k: v for k, v in args.items() if v is not None}
    file_values: dict = {}
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            text = fh.read()
        try:
            file_values = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValueError(
                f"config file {config_path}: line {e.lineno}, column {e.colno}: {e.msg}")
        if not isinstance(file_values, dict):
            raise ValueError(f"config file {config_path} must hold a flat JSON object")
    return _resolve_config(file_values, flag_values)


def _require(config: RunConfig, *keys: str):
    for key in keys:
        if getattr(config, key) is None:
            raise ValueError(f"--{key.replace('_', '-')} is required for {config.command}")


def _semantic_config(config: RunConfig) -> dict:
    out = {}
    for k, v in dataclasses.asdict(config).items():
        if k in _EXECUTION_KEYS or v is None:
            continue
        out[k] = v
    return out


def _comment_config(config: RunConfig) -> dict:
    out = {}
    for k, v in _semantic_config(config).items():
        if isinstance(v, tuple):
            v = ",".join(reporting.format_value(x) for x in v)
        out[k] = v
    return out


def _walk_config(config: RunConfig) -> WalkConfig:
    _require(config, "eps")
    return WalkConfig(epsilon=config.eps, stop_tolerance=config.stop_tol,
                      max_steps=config.max_steps)


def _domain(config: RunConfig) -> Domain:
    _require(config, "domain")
    return parse_domain(config.domain)


def _deliver(config: RunConfig, text: str) -> None:
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_payload(config: RunConfig, result: dict, checks: list[dict]) -> str:
    payload = {"config": _semantic_config(config), "result": result}
    if checks:
        payload["checks"] = checks
    return reporting.json_report(payload)


def _passed(checks: list[dict]) -> int:
    return 0 if all(c["passed"] for c in checks) else 2


def _run_solve(config: RunConfig) -> int:
    _require(config, "data", "x0")
    domain = _domain(config)
    wc = _walk_config(config)
    data = parse_boundary_data(config.data)
    est = estimate_value(domain, data, config.x0, wc, config.seed, config.walks,
                         threads=config.threads)
    if config.trace:
        _, traces = run_walks(domain, np.asarray(config.x0), wc, config.seed,
                              np.array([0], dtype=np.int64), record_trace=True)
        with open(config.trace, "w", encoding="utf-8", newline="") as fh:
            fh.write(reporting.trace_csv(traces[0]))
    result = {"mean": est.mean, "stderr": est.stderr, "n": est.n,
              "ci95": list(est.ci95), "truncated_count": est.truncated_count}
    if config.format == "csv":
        text = reporting.csv_table(
            ["mean", "stderr", "n", "truncated"],
            [[est.mean, est.stderr, est.n, est.truncated_count]],
            comments=_comment_config(config))
    else:
        text = _json_payload(config, result, [])
    _deliver(config, text)
    return 0


def _grid_points(domain: Domain, shape: tuple[int, ...]) -> np.ndarray:
    if len(shape) != domain.dim:
        raise ValueError(f"--grid needs {domain.dim} cell counts for this domain")
    if any(k < 1 for k in shape):
        raise ValueError("grid cell counts must be positive")
    lo, hi = domain.bounding_box()
    axes = [lo[i] + (np.arange(shape[i]) + 0.5) * (hi[i] - lo[i]) / shape[i]
            for i in range(len(shape))]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _run_field(config: RunConfig) -> int:
    _require(config, "data", "grid")
    domain = _domain(config)
    wc = _walk_config(config)
    data = parse_boundary_data(config.data)
    points = _grid_points(domain, config.grid)
    field = estimate_field(domain, data, points, wc, config.seed, config.walks,
                           threads=config.threads)
    if config.svg:
        if domain.dim != 2:
            raise ValueError("--svg requires a 2-D domain")
        if not config.out:
            raise ValueError("--svg requires --out to name the report file")
        k1, k2 = config.grid
        cells = field.means.reshape(k1, k2).T
        svg_path = os.path.splitext(config.out)[0] + ".svg"
        with open(svg_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(reporting.svg_heatmap(cells))
    if config.format == "csv":
        text = reporting.field_csv(field, comments=_comment_config(config))
    else:
        result = {"points": field.points, "means": field.means,
                  "stderrs": field.stderrs, "counts": field.counts,
                  "truncated": field.truncated, "skipped": list(field.skipped),
                  "n_walks": field.n_walks}
        text = _json_payload(config, result, [])
    _deliver(config, text)
    return 0


def _run_exitdist(config: RunConfig) -> int:
    _require(config, "x0")
    domain = _domain(config)
    wc = _walk_config(config)
    batch = exit_sample(domain, config.x0, wc, config.seed, config.walks,
                        threads=config.threads)
    if config.format == "csv":
        header = [f"x{i + 1}" for i in range(domain.dim)] + ["steps", "truncated"]
        rows = [list(batch.exit_points[k]) + [int(batch.steps[k]), int(batch.truncated[k])]
                for k in range(batch.exit_points.shape[0])]
        text = reporting.csv_table(header, rows, comments=_comment_config(config))
    else:
        result = {"exit_points": batch.exit_points, "steps": batch.steps,
                  "truncated": batch.truncated}
        text = _json_payload(config, result, [])
    _deliver(config, text)
    return 0


def _run_regularity(config: RunConfig) -> int:
    _require(config, "y0", "delta", "delta_hat", "eps")
    domain = _domain(config)
    report = analysis.estimate_regularity(
        domain, config.y0, config.delta, config.delta_hat, config.eps,
        config.probes, config.walks, config.seed,
        stop_tolerance=config.stop_tol, threads=config.threads)
    checks = []
    if config.threshold is not None:
        checks.append({
            "name": "min_probe_probability",
            "statistic": report.min_probability,
            "stderr": max(p.stderr for p in report.probes),
            "threshold": config.threshold,
            "passed": bool(report.min_probability >= config.threshold),
        })
    conclusion = ("consistent with walk-regularity at the probed scales"
                  if not checks or checks[0]["passed"]
                  else "below the requested probability threshold")
    if config.format == "csv":
        rows = [[*p.x0, p.probability, p.stderr, p.n] for p in report.probes]
        header = [f"x{i + 1}" for i in range(domain.dim)] + ["probability", "stderr", "n"]
        text = reporting.csv_table(header, rows, comments=_comment_config(config))
    else:
        result = {"report": report, "min_probability": report.min_probability,
                  "conclusion": conclusion}
        text = _json_payload(config, result, checks)
    _deliver(config, text)
    return _passed(checks)


def _run_escape(config: RunConfig) -> int:
    _require(config, "y0", "delta", "x0", "eps")
    domain = _domain(config)
    p, stderr = analysis.estimate_escape_probability(
        domain, config.y0, config.delta, config.x0, config.eps, config.walks,
        config.seed, stop_tolerance=config.stop_tol, max_steps=config.max_steps,
        threads=config.threads)
    checks = []
    if config.R is not None:
        bound = analysis.cone_bound_theta0(domain.dim, config.R)
        checks.append({
            "name": "exterior_cone_escape_bound",
            "statistic": p,
            "stderr": stderr,
            "threshold": bound,
            "passed": bool(p <= bound + config.sigmas * stderr),
        })
    result = {"probability": p, "stderr": stderr}
    if config.format == "csv":
        header = ["probability", "stderr"] + (["bound", "passed"] if checks else [])
        row = [p, stderr] + ([checks[0]["threshold"], checks[0]["passed"]] if checks else [])
        text = reporting.csv_table(header, [row], comments=_comment_config(config))
    else:
        text = _json_payload(config, result, checks)
    _deliver(config, text)
    return _passed(checks)


def _run_cone(config: RunConfig) -> int:
    _require(config, "dim", "R")
    theta0 = analysis.cone_bound_theta0(config.dim, config.R)
    sys.stdout.write(f"{theta0!r}\n")
    if config.out:
        text = _json_payload(config, {"theta0": theta0}, [])
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


def _run_check_mvp(config: RunConfig) -> int:
    _require(config, "data", "x0")
    domain = _domain(config)
    wc = _walk_config(config)
    data = parse_boundary_data(config.data)
    residual, stderr = analysis.mean_value_residual(
        domain, data, config.x0, wc, config.n_outer, config.n_inner, config.seed,
        threads=config.threads)
    threshold = config.sigmas * stderr + 1e-12
    checks = [{
        "name": "interior_mean_value_residual",
        "statistic": residual,
        "stderr": stderr,
        "threshold": threshold,
        "passed": bool(abs(residual) <= threshold),
    }]
    if config.format == "csv":
        text = reporting.csv_table(
            ["residual", "stderr", "threshold", "passed"],
            [[residual, stderr, threshold, checks[0]["passed"]]],
            comments=_comment_config(config))
    else:
        text = _json_payload(config, {"residual": residual, "stderr": stderr}, checks)
    _deliver(config, text)
    return _passed(checks)


def _run_check_avg(config: RunConfig) -> int:
    _require(config, "u", "x0", "eps")
    if config.u in PROBE_FUNCTIONS:
        u = PROBE_FUNCTIONS[config.u]
    else:
        u = parse_oracle(config.u)
    lap = u.laplacian(np.asarray(config.x0, dtype=np.float64))
    residual, stderr = analysis.averaging_residual(
        u, float(lap), config.x0, config.eps, config.n_samples, config.seed)
    threshold = config.sigmas * stderr + 1e-12
    checks = [{
        "name": "ball_averaging_residual",
        "statistic": residual,
        "stderr": stderr,
        "threshold": threshold,
        "passed": bool(abs(residual) <= threshold),
    }]
    if config.format == "csv":
        text = reporting.csv_table(
            ["residual", "stderr", "threshold", "passed"],
            [[residual, stderr, threshold, checks[0]["passed"]]],
            comments=_comment_config(config))
    else:
        text = _json_payload(config, {"residual": residual, "stderr": stderr}, checks)
    _deliver(config, text)
    return _passed(checks)


def _run_irregularity(config: RunConfig) -> int:
    _require(config, "y0", "distances", "eps")
    domain = _domain(config)
    table = analysis.irregularity_witness(
        domain, config.y0, [config.eps], config.distances, config.walks,
        config.seed, stop_tolerance=config.stop_tol, max_steps=config.max_steps,
        threads=config.threads)
    if config.format == "csv":
        rows = [[r.epsilon, r.start_distance, r.mean, r.stderr, r.n, r.truncated_count]
                for r in table.rows]
        text = reporting.csv_table(
            ["epsilon", "distance", "mean", "stderr", "n", "truncated"],
            rows, comments=_comment_config(config))
    else:
        text = _json_payload(config, {"table": table}, [])
    _deliver(config, text)
    return 0


_RUNNERS = {
    "solve": _run_solve,
    "field": _run_field,
    "exitdist": _run_exitdist,
    "regularity": _run_regularity,
    "escape": _run_escape,
    "cone": _run_cone,
    "check-mvp": _run_check_mvp,
    "check-avg": _run_check_avg,
    "irregularity": _run_irregularity,
}


def run(config: RunConfig) -> int:
    """Execute a resolved config; returns the process exit code."""
    return _RUNNERS[config.command](config)


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 1
        return 0 if code == 0 else 1
    except (ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    try:
        return run(config)
    except (ValueError, RuntimeError, OSError, NotImplementedError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
