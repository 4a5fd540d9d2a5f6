"""Monte Carlo solver for the Dirichlet problem via ball and sphere walks,
with boundary-regularity diagnostics and deterministic parallel sampling."""

from .analysis import (
    AUX_STREAM_BASE,
    ExitMeasureStats,
    IrregularityTable,
    OvershootStats,
    RegularityProbe,
    RegularityReport,
    WitnessRow,
    averaging_residual,
    cone_bound_theta0,
    estimate_escape_probability,
    estimate_regularity,
    exit_measure_stats,
    irregularity_witness,
    martingale_check,
    mean_value_residual,
)
from .estimator import (
    BoundaryData,
    Constant,
    Coordinate,
    DistanceTo,
    Estimate,
    FieldResult,
    HarmonicTrace,
    Tabulated,
    estimate_field,
    estimate_value,
    exit_sample,
    parse_boundary_data,
    tietze_extend,
)
from .geometry import (
    MAX_DIM,
    Annulus,
    Ball,
    Box,
    Cone,
    Difference,
    Domain,
    DomainParseError,
    HalfspaceIntersection,
    PuncturedBall,
    as_point,
    cone_parameters,
    parse_domain,
)
from .oracle import (
    FirstCoordinateQuartic,
    FundamentalSolution,
    HarmonicOracle,
    HarmonicQuadratic,
    Linear,
    PoissonDisk,
    ProbeFunction,
    SquaredNorm,
    laplacian_of,
    parse_oracle,
    poisson_disk_eval,
    radial_profile,
)
from .reporting import (
    csv_table,
    field_csv,
    format_value,
    json_report,
    svg_heatmap,
    to_jsonable,
    trace_csv,
)
from .stochastic import (
    RngStream,
    derive_stream,
    draws_per_ball,
    draws_per_sphere,
    sample_unit_ball,
    sample_unit_sphere,
)
from .walk import (
    BALL,
    SPHERE,
    STOP_TOLERANCE_FACTOR,
    StoppedOutcome,
    WalkBatch,
    WalkConfig,
    WalkOutcome,
    ball_walk_step,
    run_stopped_walks,
    run_until_exit_ball,
    run_walk,
    run_walks,
    sphere_walk_step,
)

__version__ = "0.1.0"

__all__ = [
    "Annulus",
    "as_point",
    "AUX_STREAM_BASE",
    "averaging_residual",
    "BALL",
    "Ball",
    "ball_walk_step",
    "BoundaryData",
    "Box",
    "Cone",
    "cone_bound_theta0",
    "cone_parameters",
    "Constant",
    "Coordinate",
    "csv_table",
    "derive_stream",
    "Difference",
    "DistanceTo",
    "Domain",
    "DomainParseError",
    "draws_per_ball",
    "draws_per_sphere",
    "Estimate",
    "estimate_escape_probability",
    "estimate_field",
    "estimate_regularity",
    "estimate_value",
    "exit_measure_stats",
    "exit_sample",
    "ExitMeasureStats",
    "field_csv",
    "FieldResult",
    "FirstCoordinateQuartic",
    "format_value",
    "FundamentalSolution",
    "HalfspaceIntersection",
    "HarmonicOracle",
    "HarmonicQuadratic",
    "HarmonicTrace",
    "irregularity_witness",
    "IrregularityTable",
    "json_report",
    "laplacian_of",
    "Linear",
    "martingale_check",
    "MAX_DIM",
    "mean_value_residual",
    "OvershootStats",
    "parse_boundary_data",
    "parse_domain",
    "parse_oracle",
    "poisson_disk_eval",
    "PoissonDisk",
    "ProbeFunction",
    "PuncturedBall",
    "radial_profile",
    "RegularityProbe",
    "RegularityReport",
    "RngStream",
    "run_stopped_walks",
    "run_until_exit_ball",
    "run_walk",
    "run_walks",
    "sample_unit_ball",
    "sample_unit_sphere",
    "SPHERE",
    "sphere_walk_step",
    "SquaredNorm",
    "STOP_TOLERANCE_FACTOR",
    "StoppedOutcome",
    "svg_heatmap",
    "Tabulated",
    "tietze_extend",
    "to_jsonable",
    "trace_csv",
    "WalkBatch",
    "WalkConfig",
    "WalkOutcome",
    "WitnessRow",
]
