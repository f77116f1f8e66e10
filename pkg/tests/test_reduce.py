from __future__ import annotations

import random
from fractions import Fraction
from math import lcm

import pytest

from pim.model import (
    DimensionSystem,
    Model,
    Quantity,
    build_dimension_matrix,
    evaluate_monomial,
)
from pim.ratlin import RatMatrix, ShapeError, nullspace_basis, rank, rref
from pim.reduce import (
    JacobianRowConstraint,
    MonomialConstraint,
    ScaleInvarianceError,
    analyze,
    check_scale_invariance,
    constraint_jacobian,
    effective_counts,
    redundancy_matrix,
    select_independent,
)

from oracles import (
    DRAG_A,
    DRAG_AUTO_BASIS,
    DRAG_CLASSIC_BASIS,
    DRAG_J,
    drag_model,
    minor_rank,
    pendulum_model,
    random_int_matrix,
    random_invariant_jacobian,
)


# ---------------------------------------------------------------------------
# constraint Jacobian


def test_constraint_jacobian_drag():
    assert constraint_jacobian(drag_model()) == DRAG_J


def test_constraint_jacobian_unconstrained():
    model = drag_model()
    bare = Model(model.dims, model.quantities)
    j = constraint_jacobian(bare)
    assert (j.rows, j.cols) == (0, 6)


def test_constraint_jacobian_declaration_order():
    model = drag_model(
        extra_constraints=(JacobianRowConstraint((1, 0, 0, 0, 0, 0)),)
    )
    j = constraint_jacobian(model)
    assert j.to_rows() == [
        [0, 1, 0, 0, -1, 1],
        [1, 0, 0, 0, 0, 0],
    ]
    assert minor_rank(j) == 2


def test_monomial_constraint_validation():
    with pytest.raises(ValueError, match="all zero"):
        MonomialConstraint((0, 0, 0))
    with pytest.raises(ValueError, match="positive"):
        MonomialConstraint((1, 0, 0), Fraction(-2))


# ---------------------------------------------------------------------------
# scale invariance


def test_scale_invariance_drag():
    assert check_scale_invariance(DRAG_A, DRAG_J) is True


def test_scale_invariance_no_constraints():
    assert check_scale_invariance(DRAG_A, RatMatrix.zero(0, 6)) is True


def test_scale_invariance_broken_by_fixing_one_quantity():
    j = RatMatrix.from_rows([[1, 0, 0, 0, 0, 0]])
    assert (j @ DRAG_A.transpose()).row(0) == (1, 1, -2)
    assert check_scale_invariance(DRAG_A, j) is False


def test_scale_invariance_shape_check():
    with pytest.raises(ShapeError):
        check_scale_invariance(DRAG_A, RatMatrix.zero(1, 5))


def test_scale_invariance_soundness_random():
    rng = random.Random(3301)
    for _ in range(100):
        m = rng.randint(1, 4)
        n = rng.randint(2, 8)
        a = random_int_matrix(rng, m, n, -2, 2)
        kernel = nullspace_basis(a)
        j = random_invariant_jacobian(rng, kernel, rng.randint(0, 3))
        assert check_scale_invariance(a, j) is True
        # a row outside the kernel must break invariance
        out_row = None
        for _ in range(40):
            cand = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
            prod = RatMatrix.from_rows([cand], cols=n) @ a.transpose()
            if not prod.is_zero():
                out_row = cand
                break
        if out_row is not None:
            broken = j.vstack(RatMatrix.from_rows([out_row], cols=n))
            assert check_scale_invariance(a, broken) is False


# ---------------------------------------------------------------------------
# effective counts


def test_effective_counts_drag():
    counts = effective_counts(DRAG_A, DRAG_J, DRAG_CLASSIC_BASIS)
    assert (
        counts.via_kernel_JE,
        counts.via_stacked_rank,
        counts.via_grassmann,
        counts.via_C_rank,
    ) == (2, 2, 2, 2)
    assert counts.value == 2


def test_effective_counts_unconstrained_degenerates():
    counts = effective_counts(DRAG_A, RatMatrix.zero(0, 6), DRAG_AUTO_BASIS)
    assert counts.value == 3
    assert counts.via_C_rank == 3


def test_effective_counts_fixed_reynolds():
    j = DRAG_J.vstack(RatMatrix.from_rows([[0, 1, 1, 1, -1, 0]]))
    stacked = DRAG_A.vstack(j)
    assert minor_rank(stacked) == 5
    counts = effective_counts(DRAG_A, j, DRAG_CLASSIC_BASIS)
    assert counts.value == 1
    assert counts.via_C_rank == 1


# ---------------------------------------------------------------------------
# redundancy matrix


def test_redundancy_matrix_drag_classic():
    c = redundancy_matrix(DRAG_J, DRAG_CLASSIC_BASIS)
    assert c == RatMatrix.from_rows([[0, 1, -1]])


def test_redundancy_matrix_no_constraints():
    c = redundancy_matrix(RatMatrix.zero(0, 6), DRAG_CLASSIC_BASIS)
    assert (c.rows, c.cols) == (0, 3)


def test_redundancy_matrix_auto_basis():
    c = redundancy_matrix(DRAG_J, DRAG_AUTO_BASIS)
    assert c == RatMatrix.from_rows(
        [[0, Fraction(1, 2), Fraction(-1, 2)]]
    )
    assert rank(c) == 1
    assert c @ DRAG_AUTO_BASIS.transpose() == DRAG_J


def test_redundancy_matrix_refuses_non_invariant_rows():
    j = RatMatrix.from_rows([[1, 0, 0, 0, 0, 0]])
    with pytest.raises(ScaleInvarianceError, match="scale-invariant"):
        redundancy_matrix(j, DRAG_CLASSIC_BASIS)


def test_redundancy_matrix_factorization_random():
    rng = random.Random(3302)
    for _ in range(120):
        m = rng.randint(1, 4)
        n = rng.randint(2, 7)
        a = random_int_matrix(rng, m, n, -2, 2)
        e = nullspace_basis(a)
        if e.cols == 0:
            continue
        j = random_invariant_jacobian(rng, e, rng.randint(1, 3))
        c = redundancy_matrix(j, e)
        assert c @ e.transpose() == j
        assert rank(c) == rank(j)


# ---------------------------------------------------------------------------
# independent-set selection


def test_select_independent_drag():
    selected, relations = select_independent(RatMatrix.from_rows([[0, 1, -1]]))
    assert selected == (0, 2)
    assert relations == ((Fraction(0), Fraction(1), Fraction(-1)),)


def test_select_independent_empty():
    selected, relations = select_independent(RatMatrix.zero(0, 4))
    assert selected == (0, 1, 2, 3)
    assert relations == ()


def test_select_independent_two_pivots():
    selected, relations = select_independent(
        RatMatrix.from_rows([[1, 0, 0], [0, 1, 0]])
    )
    assert selected == (2,)
    assert relations == ((1, 0, 0), (0, 1, 0))


# ---------------------------------------------------------------------------
# analyze end to end


def test_analyze_drag_classic():
    report = analyze(drag_model())
    assert (report.n, report.m, report.ell, report.d) == (6, 3, 1, 3)
    assert report.scale_invariant is True
    assert report.d_eff == 2
    assert report.C == RatMatrix.from_rows([[0, 1, -1]])
    assert report.rref_C == report.C
    assert report.selected == (0, 2)
    assert len(report.selected) == report.d_eff
    assert [r.label for r in report.relations] == ["pi2 / pi3 = 1"]
    assert report.relations[0].constant == 1
    assert report.warnings == ()


def test_analyze_pendulum_unconstrained():
    report = analyze(pendulum_model())
    assert report.d == report.d_eff == 1
    assert report.relations == ()
    assert report.selected == (0,)
    assert report.C is not None and report.C.rows == 0


def test_analyze_non_invariant_raw_row():
    model = drag_model(
        extra_constraints=(JacobianRowConstraint((1, 0, 0, 0, 0, 0)),)
    )
    report = analyze(model)
    assert report.scale_invariant is False
    assert report.C is None
    assert report.rref_C is None
    assert report.selected is None
    assert report.relations is None
    assert report.deff.via_C_rank is None
    assert report.d_eff == 1  # fixing F_D removes one more degree of freedom
    assert any("not scale-invariant" in w for w in report.warnings)


def test_analyze_pointwise_relation_label():
    # a raw Jacobian row that happens to be scale invariant: the kernel
    # vector for the Reynolds number
    model = drag_model(
        extra_constraints=(JacobianRowConstraint((0, 1, 1, 1, -1, 0)),)
    )
    report = analyze(model)
    assert report.scale_invariant is True
    assert report.d_eff == 1
    pointwise = [r for r in report.relations if r.pointwise]
    assert pointwise and all(r.constant is None for r in pointwise)
    assert all(r.label.endswith("const (pointwise)") for r in pointwise)


# ---------------------------------------------------------------------------
# quantified properties


def test_formula_agreement_random():
    rng = random.Random(3303)
    for _ in range(500):
        m = rng.randint(1, 4)
        n = rng.randint(1, 8)
        a = random_int_matrix(rng, m, n, -2, 2)
        e = nullspace_basis(a)
        j = random_invariant_jacobian(rng, e, rng.randint(0, 3))
        counts = effective_counts(a, j, e)
        assert (
            counts.via_kernel_JE
            == counts.via_stacked_rank
            == counts.via_grassmann
            == counts.via_C_rank
        )
        assert counts.via_C_rank == e.cols - rank(redundancy_matrix(j, e))


def test_formula_agreement_without_invariance():
    rng = random.Random(3304)
    for _ in range(150):
        m = rng.randint(1, 3)
        n = rng.randint(1, 6)
        a = random_int_matrix(rng, m, n, -2, 2)
        e = nullspace_basis(a)
        j = random_int_matrix(rng, rng.randint(0, 3), n, -2, 2)
        counts = effective_counts(a, j, e)
        assert counts.via_kernel_JE == counts.via_stacked_rank == counts.via_grassmann
        if not check_scale_invariance(a, j):
            assert counts.via_C_rank is None


def test_selection_correctness_random():
    rng = random.Random(3305)
    done = 0
    while done < 120:
        m = rng.randint(1, 4)
        n = rng.randint(2, 7)
        a = random_int_matrix(rng, m, n, -2, 2)
        e = nullspace_basis(a)
        if e.cols == 0:
            continue
        j = random_invariant_jacobian(rng, e, rng.randint(1, 3))
        c = redundancy_matrix(j, e)
        selected, relations = select_independent(c)
        assert len(selected) == e.cols - rank(c)
        result = rref(c)
        if result.rank:
            pivot_block = RatMatrix.from_columns(
                [result.rref.column(col) for col in result.pivot_cols]
            )
            assert rank(pivot_block) == result.rank
        # every relation, expanded to quantity exponents, is implied by the
        # constraints: it lies in the row space of J
        for row in relations:
            expanded = e @ RatMatrix.from_columns([row])
            as_row = expanded.transpose()
            assert rank(j.vstack(as_row)) == rank(j)
        done += 1


def _random_constrained_model(rng: random.Random):
    """A random model, monomial constraints built from its kernel, and a
    value assignment that satisfies every constraint exactly."""
    m = rng.randint(1, 3)
    n = rng.randint(2, 6)
    dims = DimensionSystem(tuple(f"D{i}" for i in range(m)))
    quantities = tuple(
        Quantity(f"x{j}", tuple(rng.randint(-2, 2) for _ in range(m)))
        for j in range(n)
    )
    bare = Model(dims, quantities)
    a = build_dimension_matrix(bare)
    kernel = nullspace_basis(a)
    if kernel.cols == 0:
        return None
    values = tuple(Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n))
    constraints = []
    for _ in range(rng.randint(1, 2)):
        row = [0] * n
        for jcol in range(kernel.cols):
            coeff = rng.randint(-2, 2)
            if coeff:
                col = kernel.column(jcol)
                row = [r + coeff * int(c) for r, c in zip(row, col)]
        if all(x == 0 for x in row):
            continue
        constant = evaluate_monomial(values, row)
        constraints.append(MonomialConstraint(tuple(row), constant))
    if not constraints:
        return None
    return Model(dims, quantities, tuple(constraints)), values


def test_constraint_manifold_relations_random():
    rng = random.Random(3306)
    done = 0
    while done < 120:
        built = _random_constrained_model(rng)
        if built is None:
            continue
        model, values = built
        report = analyze(model)
        assert report.scale_invariant is True
        pi_values = [
            evaluate_monomial(values, g.exponents) for g in report.pi_groups
        ]
        for relation in report.relations:
            lhs = evaluate_monomial(pi_values, relation.pi_exponents)
            if relation.constant is not None:
                assert lhs == relation.constant
            else:
                # compare after clearing fractional exponents of the K's
                q = lcm(*(x.denominator for x in relation.k_exponents))
                rhs = Fraction(1)
                for k, exp in enumerate(relation.k_exponents):
                    scaled = exp * q
                    assert scaled.denominator == 1
                    rhs *= model.constraints[k].constant ** int(scaled)
                assert lhs ** q == rhs
        done += 1


def test_drag_manifold_relation():
    rng = random.Random(3307)
    model = drag_model()
    for _ in range(100):
        rho = Fraction(rng.randint(1, 12), rng.randint(1, 12))
        mu = Fraction(rng.randint(1, 12), rng.randint(1, 12))
        values = (
            Fraction(rng.randint(1, 12), rng.randint(1, 12)),  # F_D
            rho,
            Fraction(rng.randint(1, 12), rng.randint(1, 12)),  # U
            Fraction(rng.randint(1, 12), rng.randint(1, 12)),  # L
            mu,
            mu / rho,  # nu, satisfying the constraint exactly
        )
        report = analyze(model)
        pi = [evaluate_monomial(values, g.exponents) for g in report.pi_groups]
        assert pi[1] / pi[2] == 1
