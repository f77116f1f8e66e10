"""Dimension systems, physical quantities, and dimensionless monomial groups.

A model declares named base dimensions, quantities with rational dimension
exponents, and (optionally) monomial constraints plus a kernel-basis
override. The dimension matrix has one column per quantity, in declaration
order; its kernel spans the exponent vectors of all dimensionless monomials.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import TYPE_CHECKING, Sequence

from .ratlin import (
    RatMatrix,
    RationalLike,
    _frac,
    normalize_primitive,
    nullspace_basis,
    rank,
)

if TYPE_CHECKING:
    from .reduce import Constraint

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ModelError(ValueError):
    """Raised for structurally invalid models or bad inputs to model operations."""


class UnsupportedRescaleError(ModelError):
    """Raised when a rescale would need an irrational power of a scale factor."""


def _check_identifier(name: str, what: str) -> None:
    if not _IDENT_RE.match(name):
        raise ModelError(f"{what} name {name!r} is not a valid identifier")


@dataclass(frozen=True)
class DimensionSystem:
    """Ordered set of named base dimensions (e.g. M, L, T)."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.names:
            raise ModelError("a dimension system needs at least one dimension")
        seen: set[str] = set()
        for name in self.names:
            _check_identifier(name, "dimension")
            if name in seen:
                raise ModelError(f"duplicate dimension name {name!r}")
            seen.add(name)

    @property
    def m(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


@dataclass(frozen=True)
class Quantity:
    """A named quantity with one rational exponent per base dimension."""

    name: str
    dim_exponents: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        _check_identifier(self.name, "quantity")
        object.__setattr__(self, "dim_exponents", tuple(_frac(x) for x in self.dim_exponents))


@dataclass(frozen=True)
class Model:
    """A dimension system, its quantities, and any constraints among them."""

    dims: DimensionSystem
    quantities: tuple[Quantity, ...]
    constraints: tuple["Constraint", ...] = ()
    basis_override: RatMatrix | None = None

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for q in self.quantities:
            if q.name in seen:
                raise ModelError(f"duplicate quantity name {q.name!r}")
            seen.add(q.name)
            if len(q.dim_exponents) != self.dims.m:
                raise ModelError(
                    f"quantity {q.name!r} has {len(q.dim_exponents)} dimension "
                    f"exponents, expected {self.dims.m}"
                )
        for k, c in enumerate(self.constraints):
            if len(c.vector) != self.n:
                raise ModelError(
                    f"constraint {k + 1} has {len(c.vector)} coefficients, "
                    f"expected {self.n}"
                )
        if self.basis_override is not None and self.basis_override.rows != self.n:
            raise ModelError(
                f"basis override has {self.basis_override.rows} rows, expected {self.n}"
            )

    @property
    def n(self) -> int:
        return len(self.quantities)

    @property
    def m(self) -> int:
        return self.dims.m

    @property
    def quantity_names(self) -> tuple[str, ...]:
        return tuple(q.name for q in self.quantities)


@dataclass(frozen=True)
class PiGroup:
    """One candidate dimensionless monomial: primitive integer exponents over
    the quantities, plus a rendered label."""

    exponents: tuple[int, ...]
    label: str

    def __post_init__(self) -> None:
        if all(e == 0 for e in self.exponents):
            raise ModelError("pi group exponents must not be all zero")
        if gcd(*self.exponents) != 1:
            raise ModelError("pi group exponents must be primitive (gcd 1)")
        first = next(e for e in self.exponents if e != 0)
        if first < 0:
            raise ModelError("pi group leading exponent must be positive")


@dataclass(frozen=True)
class RescaleVector:
    """Multiplicative unit changes, one positive factor per base dimension."""

    scales: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "scales", tuple(_frac(x) for x in self.scales))
        for i, s in enumerate(self.scales):
            if s <= 0:
                raise ModelError(f"rescale factor {i} must be positive, got {s}")


def build_dimension_matrix(model: Model) -> RatMatrix:
    """The m x n matrix whose column j holds quantity j's dimension exponents."""
    return RatMatrix.from_columns(
        [q.dim_exponents for q in model.quantities], rows=model.m
    )


def buckingham_count(matrix: RatMatrix) -> int:
    """Number of independent dimensionless groups: columns minus rank."""
    return matrix.cols - rank(matrix)


def format_monomial(
    names: Sequence[str],
    exponents: Sequence[RationalLike],
    *,
    spaced: bool = False,
) -> str:
    """Render an exponent vector as monomial text, e.g. ``(rho*U*L)/mu``.

    Positive exponents go to the numerator, negative to the denominator,
    factors in declaration order. With ``spaced=True`` operators get spaces
    (used for relations among pi groups: ``pi2 / pi3``).
    """
    num: list[str] = []
    den: list[str] = []
    for name, e in zip(names, exponents):
        e = _frac(e)
        if e == 0:
            continue
        mag = abs(e)
        part = name if mag == 1 else f"{name}^{mag}"
        (num if e > 0 else den).append(part)
    sep = " * " if spaced else "*"
    slash = " / " if spaced else "/"
    num_txt = sep.join(num) if num else "1"
    if num and len(num) > 1 and den and not spaced:
        num_txt = f"({num_txt})"
    if not den:
        return num_txt
    den_txt = sep.join(den)
    if len(den) > 1:
        den_txt = f"({den_txt})"
    return f"{num_txt}{slash}{den_txt}"


def pi_basis(model: Model, matrix: RatMatrix) -> tuple[RatMatrix, tuple[PiGroup, ...]]:
    """Kernel basis of the dimension matrix plus the rendered pi groups.

    Uses the model's basis override when present (after validating it is a
    genuine kernel basis), otherwise the canonical RREF free-variable basis.
    Group exponents are always reported in primitive integer form.
    """
    d = buckingham_count(matrix)
    override = model.basis_override
    if override is not None:
        if override.cols != d:
            raise ModelError(
                f"basis override has {override.cols} columns but the kernel "
                f"has dimension {d}"
            )
        product = matrix @ override
        for j in range(override.cols):
            if any(x != 0 for x in product.column(j)):
                raise ModelError(
                    f"basis override column {j} is not in the kernel of the "
                    f"dimension matrix"
                )
        if rank(override) != override.cols:
            raise ModelError("basis override is rank-deficient")
        basis = override
    else:
        basis = nullspace_basis(matrix)
    names = model.quantity_names
    groups = []
    for j in range(basis.cols):
        exps = normalize_primitive(basis.column(j))
        groups.append(PiGroup(exps, format_monomial(names, exps)))
    return basis, tuple(groups)


def evaluate_monomial(
    values: Sequence[RationalLike], exponents: Sequence[int]
) -> Fraction:
    """Evaluate prod(values[j] ** exponents[j]) exactly. Values must be positive."""
    if len(values) != len(exponents):
        raise ModelError(
            f"{len(values)} values vs {len(exponents)} exponents"
        )
    result = Fraction(1)
    for j, (v, e) in enumerate(zip(values, exponents)):
        v = _frac(v)
        if v <= 0:
            raise ModelError(f"monomial evaluation needs positive values; value {j} is {v}")
        result *= v ** e
    return result


def apply_rescale(
    model: Model, values: Sequence[RationalLike], rescale: RescaleVector
) -> tuple[Fraction, ...]:
    """Rescale quantity values under a multiplicative change of units.

    Quantity j picks up the factor prod_i s_i ** a_ij. To stay exact, any
    dimension being rescaled (s_i != 1) must have integer exponents on all
    quantities.
    """
    if len(rescale.scales) != model.m:
        raise ModelError(f"{len(rescale.scales)} scale factors for {model.m} dimensions")
    if len(values) != model.n:
        raise ModelError(f"{len(values)} values for {model.n} quantities")
    out: list[Fraction] = []
    for j, q in enumerate(model.quantities):
        v = _frac(values[j])
        if v <= 0:
            raise ModelError(f"rescale needs positive values; value {j} is {v}")
        for i, s in enumerate(rescale.scales):
            if s == 1:
                continue
            a = q.dim_exponents[i]
            if a.denominator != 1:
                raise UnsupportedRescaleError(
                    f"quantity {q.name!r} has non-integer exponent {a} on "
                    f"dimension {model.dims.names[i]!r}; rescaling it is not exact"
                )
            v *= s ** a.numerator
        out.append(v)
    return tuple(out)
