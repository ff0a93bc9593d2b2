"""Boundary-integral toolkit for transient heat conduction in 2D.

Reconstructs the boundary heat flux from measured boundary temperatures by
direct quadrature of the hypersingular heat operator, with the supporting
layer-potential machinery (single, double, adjoint, hypersingular), exact
point-source oracles, a causal second-kind solver, and a CSV/CLI harness.
"""

from .exceptions import (
    ConfigError,
    DegenerateTangentError,
    DimensionMismatchError,
    GridMismatchError,
    InvalidParameterError,
    MissingReferenceError,
    OrientationError,
    PartialGridError,
    PointOutsideDomainError,
    SourceInsideDomainError,
    ToolkitError,
    ZeroReferenceError,
)
from .geometry import (
    BoundaryCurve,
    SpaceTimeGrid,
    curve_point,
    curve_tangent,
    make_grid,
    outward_normal,
    signed_area,
)
from .harness import (
    ConvergenceRow,
    DataSpec,
    ExperimentConfig,
    ExperimentReport,
    OutputPaths,
    ReferenceSpec,
    SelfCheckReport,
    config_from_dict,
    config_from_file,
    config_to_dict,
    convergence_study,
    kernel_selfcheck,
    parse_config,
    run_experiment,
    serialize_config,
    write_convergence_csv,
    write_direct_csv,
    write_field_csv,
    write_flux_csv,
)
from .inverse import (
    ErrorMetrics,
    ReconstructionResult,
    error_metrics,
    reconstruct_field,
    reconstruct_flux_full,
    reconstruct_flux_partial,
)
from .kernels import (
    CORRECTED,
    PAPER_LITERAL,
    KernelEvalContext,
    KernelMode,
    g_fundamental,
    g_gradient,
    hypersingular_kernel,
    normal_derivative_x,
    normal_derivative_y,
)
from .potentials import (
    BoundaryField,
    InteriorSamples,
    adjoint_double_layer_apply,
    assemble_operator_matrix,
    cauchy_residuals,
    double_layer_apply,
    evaluate_interior,
    hypersingular_apply,
    operator_time_blocks,
    single_layer_apply,
)
from .synthetic import (
    PointSourceSolution,
    paper_example_dirichlet,
    point_source_flux,
    point_source_trace,
    solve_second_kind,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryCurve", "SpaceTimeGrid", "make_grid", "curve_point",
    "curve_tangent", "outward_normal", "signed_area",
    "KernelMode", "KernelEvalContext", "CORRECTED", "PAPER_LITERAL",
    "g_fundamental", "g_gradient", "normal_derivative_x",
    "normal_derivative_y", "hypersingular_kernel",
    "BoundaryField", "InteriorSamples", "single_layer_apply",
    "double_layer_apply", "adjoint_double_layer_apply",
    "hypersingular_apply", "operator_time_blocks",
    "assemble_operator_matrix", "evaluate_interior", "cauchy_residuals",
    "PointSourceSolution", "point_source_trace", "point_source_flux",
    "paper_example_dirichlet", "solve_second_kind",
    "ReconstructionResult", "ErrorMetrics", "reconstruct_flux_full",
    "reconstruct_flux_partial", "reconstruct_field", "error_metrics",
    "ExperimentConfig", "ExperimentReport", "ConvergenceRow",
    "DataSpec", "ReferenceSpec", "OutputPaths", "SelfCheckReport",
    "parse_config", "serialize_config", "config_from_dict",
    "config_from_file", "config_to_dict", "run_experiment",
    "convergence_study", "kernel_selfcheck", "write_flux_csv",
    "write_direct_csv", "write_field_csv", "write_convergence_csv",
    "ToolkitError", "InvalidParameterError", "DegenerateTangentError",
    "OrientationError", "GridMismatchError", "PointOutsideDomainError",
    "SourceInsideDomainError", "PartialGridError", "DimensionMismatchError",
    "ZeroReferenceError", "MissingReferenceError", "ConfigError",
]
