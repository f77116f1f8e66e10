"""Dimensional analysis with monomial constraints, in exact rational arithmetic.

Given named base dimensions, quantities with rational dimension exponents,
and constraints (monomials equal to positive constants, or raw pointwise
Jacobian rows), this package computes the candidate dimensionless groups,
the effective number of independent groups under the constraints (by four
cross-checked formulas), and a mechanically selected independent subset,
together with the relations that make the remaining groups redundant.
"""

from .model import (
    DimensionSystem,
    Model,
    ModelError,
    PiGroup,
    Quantity,
    RescaleVector,
    UnsupportedRescaleError,
    apply_rescale,
    buckingham_count,
    build_dimension_matrix,
    evaluate_monomial,
    format_monomial,
    pi_basis,
)
from .modelfile import (
    ErrorCode,
    ModelFileError,
    ParseError,
    SourceSpan,
    parse_dimexpr,
    parse_model,
    parse_monomial,
    render_model,
    render_report,
)
from .ratlin import (
    RatMatrix,
    Rational,
    RrefResult,
    ShapeError,
    exact_pow,
    gram_solve,
    normalize_primitive,
    nullspace_basis,
    rank,
    row_intersection_dim,
    rref,
    rref_with_transform,
)
from .reduce import (
    AnalysisReport,
    Constraint,
    EffectiveCounts,
    InvariantViolation,
    JacobianRowConstraint,
    MonomialConstraint,
    Relation,
    ScaleInvarianceError,
    analyze,
    check_scale_invariance,
    constraint_jacobian,
    effective_counts,
    redundancy_matrix,
    select_independent,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "Constraint",
    "DimensionSystem",
    "EffectiveCounts",
    "ErrorCode",
    "InvariantViolation",
    "JacobianRowConstraint",
    "Model",
    "ModelError",
    "ModelFileError",
    "MonomialConstraint",
    "ParseError",
    "PiGroup",
    "Quantity",
    "RatMatrix",
    "Rational",
    "Relation",
    "RescaleVector",
    "RrefResult",
    "ScaleInvarianceError",
    "ShapeError",
    "SourceSpan",
    "UnsupportedRescaleError",
    "analyze",
    "apply_rescale",
    "buckingham_count",
    "build_dimension_matrix",
    "check_scale_invariance",
    "constraint_jacobian",
    "effective_counts",
    "evaluate_monomial",
    "exact_pow",
    "format_monomial",
    "gram_solve",
    "normalize_primitive",
    "nullspace_basis",
    "parse_dimexpr",
    "parse_model",
    "parse_monomial",
    "pi_basis",
    "rank",
    "redundancy_matrix",
    "render_model",
    "render_report",
    "row_intersection_dim",
    "rref",
    "rref_with_transform",
    "select_independent",
]
