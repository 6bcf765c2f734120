"""SOS program construction and SDP compilation tests."""

import math
from fractions import Fraction

import pytest

from barriercert.errors import EmptyBoxError, OddDegreeError
from barriercert.poly import (
    Monomial,
    Polynomial,
    VariableTable,
    monomial_basis,
    parse_polynomial,
)
from barriercert.sos import (
    LinExpr,
    PolyLin,
    SemiAlgebraicSet,
    SosProgram,
    box_to_semialgebraic,
    compile_to_sdp,
    dump_problem_text,
    gram_polynomial,
)

T1 = VariableTable.create(1)
T2 = VariableTable.create(2)


# --------------------------------------------------------------------------
# box encodings
# --------------------------------------------------------------------------


def test_box_affine_encoding_vdp_state_space():
    s = box_to_semialgebraic([-7, -7], [7, 7], T2)
    expected = ["x1 + 7.0", "-x1 + 7.0", "x2 + 7.0", "-x2 + 7.0"]
    assert [g.to_text() for g in s.inequalities] == expected


def test_box_affine_encoding_two_tank_unsafe():
    s = box_to_semialgebraic([9, 9], [10, 10], T2)
    expected = ["x1 - 9.0", "-x1 + 10.0", "x2 - 9.0", "-x2 + 10.0"]
    assert [g.to_text() for g in s.inequalities] == expected


def test_box_point_set():
    s = box_to_semialgebraic([1], [1], T1)
    assert [g.to_text() for g in s.inequalities] == ["x1 - 1.0", "-x1 + 1.0"]


def test_box_empty_raises():
    with pytest.raises(EmptyBoxError):
        box_to_semialgebraic([2], [1], T1)


def test_box_quadratic_encoding():
    s = box_to_semialgebraic([0, -1], [1, 1], T2, encoding="quadratic")
    assert len(s.inequalities) == 2
    g = s.inequalities[0]
    assert g == parse_polynomial("x1*(1 - x1)", T2)


def test_semialgebraic_rejects_noise_variables():
    joint = VariableTable.create(1, 1)
    g = parse_polynomial("varsigma1", joint)
    with pytest.raises(ValueError):
        SemiAlgebraicSet((g,))


# --------------------------------------------------------------------------
# unknown polynomials
# --------------------------------------------------------------------------


def test_free_unknown_has_binomial_many_coefficients():
    prog = SosProgram(T2)
    u = prog.new_unknown_poly("q", 2, 2, sos_constrained=False)
    assert len(u.coeff_ids) == 6
    assert u.gram is None


def test_sos_unknown_gram_dimensions():
    prog = SosProgram(T2)
    u = prog.new_unknown_poly("B", 2, 4)
    assert u.gram.dim == 6  # half-basis of degree 2 in 2 vars
    prog1 = SosProgram(T1)
    u1 = prog1.new_unknown_poly("B", 1, 6)
    assert u1.gram.dim == 4  # {1, x, x^2, x^3}


def test_sos_unknown_rejects_odd_degree():
    prog = SosProgram(T2)
    with pytest.raises(OddDegreeError):
        prog.new_unknown_poly("B", 2, 3)


def test_block_dimension_formula_up_to_8():
    for n in range(1, 9):
        table = VariableTable.create(n)
        for degree in range(0, 9, 2):
            prog = SosProgram(table)
            u = prog.new_unknown_poly("u", n, degree)
            half = degree // 2
            assert u.gram.dim == math.comb(n + half, half)
            free = prog.new_unknown_poly("v", n, degree, sos_constrained=False)
            assert len(free.coeff_ids) == math.comb(n + degree, degree)


# --------------------------------------------------------------------------
# compilation
# --------------------------------------------------------------------------


def test_compile_single_degree4_constraint_counts():
    prog = SosProgram(T2)
    expr = PolyLin.from_poly(parse_polynomial("x1^4 + x2^2 + 1", T2))
    prog.add_sos_constraint(expr, "only")
    problem = compile_to_sdp(prog)
    assert len(problem.blocks) == 1
    assert problem.blocks[0].dim == 6
    assert problem.n_rows == 15  # monomials of degree <= 4 in 2 vars


def test_compile_empty_program_is_trivially_feasible():
    from barriercert.sdp import SolveStatus, solve_sdp

    problem = compile_to_sdp(SosProgram(T2))
    assert len(problem.blocks) == 0
    assert solve_sdp(problem).status is SolveStatus.FEASIBLE


def _expected_barrier_block_dims(n, b_degree, l_degree, flow_expr_degree, n_unsafe):
    """Independent enumeration of the Gram inventory for a deterministic
    barrier program over boxes (affine encoding, one multiplier per
    inequality, expression degrees padded to even)."""
    C = math.comb
    half = lambda d: (d + 1) // 2
    dims = []
    dims.append(C(n + b_degree // 2, b_degree // 2))  # B itself
    per_set = 2 * n
    level_deg = max(b_degree, l_degree + 1)
    for _ in range(1 + n_unsafe):  # initial + each unsafe region
        dims.append(C(n + half(level_deg), half(level_deg)))
        dims.extend([C(n + l_degree // 2, l_degree // 2)] * per_set)
    flow_deg = max(flow_expr_degree, l_degree + 1)
    dims.append(C(n + half(flow_deg), half(flow_deg)))
    dims.extend([C(n + l_degree // 2, l_degree // 2)] * per_set)
    dims.extend([1, 1, 1])  # gamma >= 0, lambda >= 0, lambda - gamma >= gap
    return sorted(dims)


def test_compile_dt_ds_block_inventory_matches_enumeration_oracle():
    # n=2, b_degree=2, l_degree=2, one unsafe box, affine map (B(f) degree 2)
    n, b_degree, l_degree = 2, 2, 2
    prog = SosProgram(T2)
    B = prog.new_unknown_poly("B", n, b_degree)
    gamma = prog.new_scalar("gamma", nonneg=True)
    lam = prog.new_scalar("lambda", nonneg=True)
    prog.add_linear_constraint(
        LinExpr.of_var(lam.var_id) - LinExpr.of_var(gamma.var_id), ">=", Fraction(1, 10**6)
    )

    space = box_to_semialgebraic([0.1, 0.1], [0.5, 1.0], T2)
    init = box_to_semialgebraic([0.1, 0.1], [0.4, 1.0], T2)
    unsafe = box_to_semialgebraic([0.45, 0.6], [0.5, 1.0], T2)

    f = [parse_polynomial("-0.01*x2", T2), parse_polynomial("0.01*x1", T2)]
    B_lin = B.poly_lin(T2)
    # B(f) expressed through the barrier's coefficient forms
    B_of_f = PolyLin(T2)
    for mono, expr in B_lin.coeffs.items():
        composed = Polynomial.constant(T2, 1)
        for idx, e in mono.exponents().items():
            composed = composed * f[idx] ** e
        for cm, cc in composed.terms.items():
            B_of_f.add_inplace(cm, expr.scale(cc))

    def lagrangian(sos_set):
        acc = PolyLin.zero(T2)
        for k, g in enumerate(sos_set.inequalities):
            mult = prog.new_unknown_poly(f"l{len(prog.unknowns)}", n, l_degree)
            acc = acc + mult.poly_lin(T2).mul_poly(g)
        return acc

    prog.add_sos_constraint(
        B_lin.scale(-1) - lagrangian(init) + PolyLin.zero(T2).add_scalar(LinExpr.of_var(gamma.var_id)),
        "initial",
    )
    prog.add_sos_constraint(
        B_lin - lagrangian(unsafe) + PolyLin.zero(T2).add_scalar(LinExpr.of_var(lam.var_id).scale(-1)),
        "unsafe0",
    )
    prog.add_sos_constraint(B_of_f.scale(-1) + B_lin - lagrangian(space), "flow")

    problem = compile_to_sdp(prog)
    got = sorted(b.dim for b in problem.blocks)
    expected = _expected_barrier_block_dims(n, b_degree, l_degree, b_degree, 1)
    assert got == expected
    # 3 constraint Grams of dim 6 (degree-3 expressions padded to 4),
    # 12 multiplier Grams and one barrier Gram of dim 3, 3 scalar slacks
    assert got == [1, 1, 1] + [3] * 13 + [6] * 3
    match_rows = [r for r in problem.rows if not r.label.startswith("lin")]
    assert len(match_rows) == 3 * 15


def test_dump_problem_text_shape():
    prog = SosProgram(T1)
    prog.new_scalar("gamma", nonneg=True)
    prog.add_sos_constraint(PolyLin.from_poly(parse_polynomial("x1^2", T1)), "c0")
    text = dump_problem_text(compile_to_sdp(prog))
    assert text.startswith("SDP ")
    assert "BLOCK" in text and "ROW" in text and "SCALAR gamma" in text
