"""Constrained reduction of dimensionless groups.

Constraints enter as rows of a Jacobian in log space: a monomial constraint
``prod x_j^c_j = K`` contributes its exponent vector ``c`` (the constant
never affects the Jacobian), and a raw row stands for a general constraint
linearized at the analysis point. When constraints are scale invariant
(J @ A^T == 0) every Jacobian row lies in the kernel of the dimension
matrix, so J factors through the kernel basis as J = C E^T; row-reducing C
exposes all linear relations among the candidate pi groups and the
non-pivot columns select an independent subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar

from .model import (
    Model,
    PiGroup,
    build_dimension_matrix,
    format_monomial,
    pi_basis,
)
from .ratlin import (
    RatMatrix,
    ShapeError,
    _frac,
    exact_pow,
    gram_solve,
    normalize_primitive,
    rank,
    rref,
    rref_with_transform,
    row_intersection_dim,
)


class InvariantViolation(RuntimeError):
    """Internal consistency check failed. Always a bug in the engine, never a
    modeling error."""


class ScaleInvarianceError(ValueError):
    """Raised when an operation that assumes scale-invariant constraints is
    given constraints that are not."""


@dataclass(frozen=True)
class MonomialConstraint:
    """The constraint prod_j x_j ** exponents[j] == constant (constant > 0)."""

    exponents: tuple[Fraction, ...]
    constant: Fraction = Fraction(1)

    kind: ClassVar[str] = "monomial"

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponents", tuple(_frac(x) for x in self.exponents))
        object.__setattr__(self, "constant", _frac(self.constant))
        if all(e == 0 for e in self.exponents):
            raise ValueError("monomial constraint exponents must not be all zero")
        if self.constant <= 0:
            raise ValueError(f"constraint constant must be positive, got {self.constant}")

    @property
    def vector(self) -> tuple[Fraction, ...]:
        return self.exponents


@dataclass(frozen=True)
class JacobianRowConstraint:
    """One constraint-Jacobian row supplied directly, valid at the analysis
    point only (pointwise); no constant is associated with it."""

    entries: tuple[Fraction, ...]

    kind: ClassVar[str] = "jacobian_row"

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(_frac(x) for x in self.entries))

    @property
    def vector(self) -> tuple[Fraction, ...]:
        return self.entries


Constraint = MonomialConstraint | JacobianRowConstraint


@dataclass(frozen=True)
class EffectiveCounts:
    """The effective number of independent pi groups, by each formula.

    The three general formulas always agree; the rank-of-C form exists only
    for scale-invariant constraints (and then agrees with the rest).
    """

    via_kernel_JE: int
    via_stacked_rank: int
    via_grassmann: int
    via_C_rank: int | None = None

    @property
    def value(self) -> int:
        return self.via_kernel_JE


@dataclass(frozen=True)
class Relation:
    """One linear relation among the candidate pi groups.

    ``coeffs`` is a nonzero row of rref(C): sum_k coeffs[k] * dln(pi_k) = 0.
    On the constraint manifold the primitive-integer form says
    prod_k pi_k ** pi_exponents[k] equals prod_k K_k ** k_exponents[k],
    a constant built from the monomial constraint constants. ``constant``
    holds its exact rational value when one exists; it is None when the
    value is irrational or when a pointwise Jacobian row contributes (then
    the relation only holds infinitesimally at the analysis point).
    """

    coeffs: tuple[Fraction, ...]
    pi_exponents: tuple[int, ...]
    k_exponents: tuple[Fraction, ...]
    constant: Fraction | None
    pointwise: bool
    label: str


@dataclass(frozen=True)
class AnalysisReport:
    """Everything the analysis produces, ready for rendering.

    When the constraints are not scale invariant, C, rref_C, selected, and
    relations are None: the effective count is still well defined, but the
    C-based elimination of redundant groups is not.
    """

    dimensions: tuple[str, ...]
    quantities: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    n: int
    m: int
    ell: int
    d: int
    A: RatMatrix
    J: RatMatrix
    E: RatMatrix
    pi_groups: tuple[PiGroup, ...]
    scale_invariant: bool
    deff: EffectiveCounts
    C: RatMatrix | None
    rref_C: RatMatrix | None
    selected: tuple[int, ...] | None
    relations: tuple[Relation, ...] | None
    warnings: tuple[str, ...]

    @property
    def d_eff(self) -> int:
        return self.deff.value


def constraint_jacobian(model: Model) -> RatMatrix:
    """Stack the constraints' log-space Jacobian rows (ell x n; ell may be 0)."""
    return RatMatrix.from_rows(
        [c.vector for c in model.constraints], cols=model.n
    )


def check_scale_invariance(a: RatMatrix, j: RatMatrix) -> bool:
    """True iff J @ A^T == 0, i.e. scaling directions are tangent to the
    constraint manifold. Vacuously true with no constraints."""
    if a.cols != j.cols:
        raise ShapeError(f"column counts differ: A has {a.cols}, J has {j.cols}")
    return (j @ a.transpose()).is_zero()


def redundancy_matrix(j: RatMatrix, e: RatMatrix) -> RatMatrix:
    """The unique C with J = C E^T, for scale-invariant constraints.

    Each row of J must lie in the column space of the kernel basis E (that
    is exactly scale invariance when E spans the kernel of the dimension
    matrix); otherwise no exact factorization exists and this refuses.
    """
    if j.cols != e.rows:
        raise ShapeError(f"J has {j.cols} columns but E has {e.rows} rows")
    e_t = e.transpose()
    if rank(e_t.vstack(j)) != rank(e_t):
        raise ScaleInvarianceError(
            "C-factorization requires scale-invariant constraints"
        )
    c = gram_solve(e, j)
    if c @ e_t != j:
        raise InvariantViolation(
            "redundancy matrix failed to reproduce the Jacobian: C @ E^T != J"
        )
    return c


def effective_counts(a: RatMatrix, j: RatMatrix, e: RatMatrix) -> EffectiveCounts:
    """Compute the effective count by every available formula and cross-check.

    General formulas (always valid): dim ker(J E), n - rank([A; J]), and the
    Grassmann form n - rank A - rank J + dim(rowspace A meet rowspace J). For
    scale-invariant constraints additionally d - rank C, which must also
    match n - rank A - rank J. Disagreement means an engine bug.
    """
    d = e.cols
    via_kernel = d - rank(j @ e)
    via_stacked = a.cols - rank(a.vstack(j))
    via_grassmann = a.cols - rank(a) - rank(j) + row_intersection_dim(a, j)
    if not (via_kernel == via_stacked == via_grassmann):
        raise InvariantViolation(
            f"effective-count formulas disagree: kernel(JE)={via_kernel}, "
            f"stacked={via_stacked}, grassmann={via_grassmann}"
        )
    via_c: int | None = None
    if check_scale_invariance(a, j):
        c = redundancy_matrix(j, e)
        if rank(c) != rank(j):
            raise InvariantViolation(
                f"rank C = {rank(c)} differs from rank J = {rank(j)}"
            )
        via_c = d - rank(c)
        simplified = a.cols - rank(a) - rank(j)
        if via_c != via_kernel or simplified != via_kernel:
            raise InvariantViolation(
                f"scale-invariant effective-count forms disagree: "
                f"d - rank C = {via_c}, n - rank A - rank J = {simplified}, "
                f"general = {via_kernel}"
            )
    return EffectiveCounts(via_kernel, via_stacked, via_grassmann, via_c)


def select_independent(
    c: RatMatrix,
) -> tuple[tuple[int, ...], tuple[tuple[Fraction, ...], ...]]:
    """Mechanical selection from the row-reduced redundancy matrix.

    Returns the non-pivot column indices of rref(C), in increasing order
    (one systematic choice of an independent set of pi groups), and the
    nonzero rows of rref(C) (the relations among the candidates).
    """
    result = rref(c)
    pivot_set = set(result.pivot_cols)
    selected = tuple(k for k in range(c.cols) if k not in pivot_set)
    relations = tuple(result.rref.row(i) for i in range(result.rank))
    return selected, relations


def _format_constants_monomial(k_exponents: tuple[Fraction, ...]) -> str:
    parts = []
    for idx, exp in enumerate(k_exponents):
        if exp == 0:
            continue
        name = f"K{idx + 1}"
        if exp == 1:
            parts.append(name)
        else:
            txt = str(exp)
            if exp < 0 or exp.denominator != 1:
                txt = f"({txt})"
            parts.append(f"{name}^{txt}")
    return " * ".join(parts) if parts else "1"


def _build_relations(
    constraints: tuple[Constraint, ...],
    rref_c: RatMatrix,
    transform: RatMatrix,
    n_relations: int,
    n_groups: int,
) -> tuple[Relation, ...]:
    pi_names = [f"pi{k + 1}" for k in range(n_groups)]
    relations = []
    for i in range(n_relations):
        coeffs = rref_c.row(i)
        pi_exps = normalize_primitive(coeffs)
        first = next(k for k, x in enumerate(coeffs) if x != 0)
        scale = Fraction(pi_exps[first]) / coeffs[first]
        k_exps = tuple(scale * t for t in transform.row(i))
        pointwise = any(
            t != 0 and constraints[k].kind == "jacobian_row"
            for k, t in enumerate(k_exps)
        )
        constant: Fraction | None = None
        if not pointwise:
            constant = Fraction(1)
            for k, t in enumerate(k_exps):
                if t == 0:
                    continue
                term = exact_pow(constraints[k].constant, t)
                if term is None:
                    constant = None
                    break
                constant *= term
        left = format_monomial(pi_names, pi_exps, spaced=True)
        if pointwise:
            right = "const (pointwise)"
        elif constant is not None:
            right = str(constant)
        else:
            right = _format_constants_monomial(k_exps)
        relations.append(
            Relation(coeffs, pi_exps, k_exps, constant, pointwise, f"{left} = {right}")
        )
    return tuple(relations)


def analyze(model: Model) -> AnalysisReport:
    """Run the full pipeline: dimension matrix, kernel basis and pi groups,
    constraint Jacobian, scale-invariance check, effective counts, and (when
    scale invariant) the C-based elimination of redundant groups."""
    a = build_dimension_matrix(model)
    e, groups = pi_basis(model, a)
    j = constraint_jacobian(model)
    invariant = check_scale_invariance(a, j)
    counts = effective_counts(a, j, e)
    warnings: list[str] = []
    c = rref_c = None
    selected: tuple[int, ...] | None = None
    relations: tuple[Relation, ...] | None = None
    if invariant:
        c = redundancy_matrix(j, e)
        result, transform = rref_with_transform(c)
        pivot_set = set(result.pivot_cols)
        rref_c = result.rref
        selected = tuple(k for k in range(c.cols) if k not in pivot_set)
        relations = _build_relations(
            model.constraints, rref_c, transform, result.rank, e.cols
        )
    else:
        warnings.append(
            "constraints are not scale-invariant (J @ A^T != 0); "
            "the C-based elimination of redundant pi groups is skipped"
        )
    return AnalysisReport(
        dimensions=model.dims.names,
        quantities=model.quantity_names,
        constraints=model.constraints,
        n=model.n,
        m=model.m,
        ell=j.rows,
        d=e.cols,
        A=a,
        J=j,
        E=e,
        pi_groups=groups,
        scale_invariant=invariant,
        deff=counts,
        C=c,
        rref_C=rref_c,
        selected=selected,
        relations=relations,
        warnings=tuple(warnings),
    )
