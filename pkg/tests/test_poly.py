"""Polynomial algebra and parser tests, including ring-law property suites."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barriercert.errors import (
    DimensionMismatchError,
    NonPolynomialError,
    PolynomialSyntaxError,
    UnknownSymbolError,
)
from barriercert.poly import (
    Monomial,
    Polynomial,
    VariableTable,
    monomial_basis,
    parse_polynomial,
    to_fraction,
)

T2 = VariableTable.create(2)
T1 = VariableTable.create(1)


def poly(text, table=T2):
    return parse_polynomial(text, table)


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def test_parse_linear_combination():
    p = poly("x1 + 0.1*x2")
    assert p.coefficient(Monomial((1, 0))) == 1
    assert p.coefficient(Monomial((0, 1))) == Fraction(1, 10)
    assert len(p.terms) == 2


def test_parse_jet_engine_drift_terms():
    # second/third terms of the jet-engine drift: x1^2 - 0.5*x1^3
    p = parse_polynomial("x1^2 - 0.5*x1^3", T1)
    assert p.coefficient(Monomial((2,))) == 1
    assert p.coefficient(Monomial((3,))) == Fraction(-1, 2)
    assert p.to_text() == "-0.5*x1^3 + x1^2"


def test_parse_rejects_transcendental_call():
    with pytest.raises(NonPolynomialError):
        poly("sin(x1)")


def test_parse_rejects_unknown_symbol():
    with pytest.raises(UnknownSymbolError):
        poly("x1 + q")


def test_parse_rejects_negative_and_fractional_exponents():
    with pytest.raises(NonPolynomialError):
        poly("x1^-2")
    with pytest.raises(NonPolynomialError):
        poly("x1^1.5")


def test_parse_rejects_division_by_variable():
    with pytest.raises(NonPolynomialError):
        poly("1/x1")
    with pytest.raises(NonPolynomialError):
        poly("x2/(x1+1)")


def test_parse_division_by_constant():
    p = poly("x1/4 + x2/(2*2)")
    assert p.coefficient(Monomial((1, 0))) == Fraction(1, 4)
    assert p.coefficient(Monomial((0, 1))) == Fraction(1, 4)
    with pytest.raises(NonPolynomialError):
        poly("x1/0")


def test_parse_syntax_errors():
    for bad in ["", "x1 +", "(x1", "x1^^2", "2(x1)", "x1^2^3", "x1 x2"]:
        with pytest.raises(PolynomialSyntaxError):
            poly(bad)


def test_parse_double_star_power_and_scientific_notation():
    p = poly("2e-1*x1**2")
    assert p.coefficient(Monomial((2, 0))) == Fraction(1, 5)


def test_parse_unary_minus_and_expansion():
    p = poly("-(x1 - x2)*(x1 + x2)")
    assert p == poly("x2^2 - x1^2")


def test_noise_variables_parse():
    table = VariableTable.create(2, 2)
    p = parse_polynomial("x1 + 0.1*varsigma1 - varsigma2^2", table)
    assert p.degree == 2
    assert p.uses_variable(table.index("varsigma1"))


# --------------------------------------------------------------------------
# arithmetic
# --------------------------------------------------------------------------


def test_difference_of_squares():
    assert poly("(x1+1)*(x1-1)") == poly("x1^2 - 1")


def test_like_term_merge():
    assert poly("x1^2") + poly("2*x1^2") == poly("3*x1^2")


def test_scale_by_zero_annihilates():
    p = poly("x1^2 + 3*x2 - 7")
    assert p.scale(0).is_zero()
    assert p.scale(0).degree == -1


def test_zero_polynomial_degree_sentinel():
    assert Polynomial.zero(T2).degree == -1
    assert (poly("x1") - poly("x1")).degree == -1


def test_differentiate_examples():
    p = poly("x1^2*x2")
    assert p.differentiate(0) == poly("2*x1*x2")
    assert poly("x1^2").differentiate(1).is_zero()
    assert poly("x1^4").differentiate(0, order=2) == poly("12*x1^2")


def test_substitute_binomial_expansion():
    p = poly("x1^2")
    shifted = p.substitute({0: poly("x1 + 0.1*x2")})
    assert shifted == poly("x1^2 + 0.2*x1*x2 + 0.01*x2^2")


def test_substitute_identity():
    p = poly("x1^3 - x2 + 2")
    assert p.substitute({}) == p
    assert p.substitute({0: poly("x1"), 1: poly("x2")}) == p


def test_substitute_jump_shift_matches_evaluation_oracle():
    # B = x^2, x -> x + 0.1: check symbolic expansion against direct
    # evaluation of B(x + 0.1) at 5 random points.
    B = parse_polynomial("x1^2", T1)
    shifted = B.substitute({0: parse_polynomial("x1 + 0.1", T1)})
    assert shifted == parse_polynomial("x1^2 + 0.2*x1 + 0.01", T1)
    rng = np.random.default_rng(7)
    for x in rng.uniform(-3, 3, size=5):
        assert shifted.evaluate([x]) == pytest.approx(B.evaluate([x + 0.1]), rel=1e-12)


def test_evaluate_examples():
    assert poly("x1^2 + x2").evaluate([2, 3]) == pytest.approx(7)
    assert Polynomial.zero(T2).evaluate([123.0, -4.5]) == 0.0
    assert parse_polynomial("x1^3", T1).evaluate([-2]) == pytest.approx(-8)
    with pytest.raises(DimensionMismatchError):
        poly("x1").evaluate([1.0])


def test_evaluate_batch_matches_scalar():
    p = poly("3*x1^2*x2 - 0.5*x2^3 + 1")
    pts = np.random.default_rng(0).uniform(-2, 2, size=(50, 2))
    batch = p.evaluate_batch(pts)
    for row, val in zip(pts, batch):
        assert val == pytest.approx(p.evaluate(row), rel=1e-12, abs=1e-12)


# --------------------------------------------------------------------------
# monomial basis
# --------------------------------------------------------------------------


def test_monomial_basis_order_2_2():
    basis = monomial_basis(2, 2)
    assert [str(m) for m in basis] == ["1", "x1", "x2", "x1^2", "x1*x2", "x2^2"]
    assert len(basis) == 6


def test_monomial_basis_univariate():
    basis = monomial_basis(1, 4)
    assert [m.powers for m in basis] == [(0,), (1,), (2,), (3,), (4,)]


def test_monomial_basis_count_3_2():
    assert len(monomial_basis(3, 2)) == 10


def test_monomial_basis_counts_match_binomials():
    for n in range(1, 7):
        for d in range(0, 9):
            assert len(monomial_basis(n, d)) == math.comb(n + d, d)


def test_monomial_sparse_view_has_no_zero_exponents():
    m = Monomial((0, 3, 0, 1))
    assert m.exponents() == {1: 3, 3: 1}
    assert m.degree == 4


# --------------------------------------------------------------------------
# canonical forms
# --------------------------------------------------------------------------


def test_canonical_text_form():
    p = poly("3*x1^2*x2 - 0.5")
    assert p.to_text() == "3.0*x1^2*x2 - 0.5"


def test_structured_round_trip():
    p = poly("0.25*x1^4 - 2*x1*x2 + x2 - 1")
    again = Polynomial.from_structured(T2, p.to_structured())
    assert again == p


def test_text_round_trip():
    p = poly("1.5*x1^3 - 0.125*x2^2 + 7")
    assert parse_polynomial(p.to_text(), T2) == p


# --------------------------------------------------------------------------
# property suites: ring laws, linearity, homomorphisms
# --------------------------------------------------------------------------

coeffs = st.fractions(
    min_value=-8, max_value=8, max_denominator=16
)


def random_poly(nvars=3, max_degree=4):
    table = VariableTable.create(nvars)
    monos = monomial_basis(nvars, max_degree)
    return st.lists(
        st.tuples(st.sampled_from(monos), coeffs), min_size=0, max_size=6
    ).map(lambda pairs: Polynomial(table, dict(pairs)))


@settings(max_examples=60, deadline=None)
@given(random_poly(), random_poly(), random_poly())
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@settings(max_examples=60, deadline=None)
@given(random_poly(), random_poly(), coeffs, coeffs)
def test_differentiate_is_linear(p, q, a, b):
    lhs = (p.scale(a) + q.scale(b)).differentiate(0)
    rhs = p.differentiate(0).scale(a) + q.differentiate(0).scale(b)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(random_poly(), random_poly())
def test_evaluate_is_ring_homomorphism(p, q):
    rng = np.random.default_rng(42)
    v = rng.uniform(-1.5, 1.5, size=3)
    lhs = (p * q).evaluate(v)
    rhs = p.evaluate(v) * q.evaluate(v)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(random_poly(nvars=2, max_degree=3), random_poly(nvars=2, max_degree=2))
def test_substitute_evaluate_consistency(p, g):
    bindings = {0: g}
    composed = p.substitute(bindings)
    rng = np.random.default_rng(3)
    v = rng.uniform(-1.2, 1.2, size=2)
    inner = [g.evaluate(v), v[1]]
    assert composed.evaluate(v) == pytest.approx(
        p.evaluate(inner), rel=1e-10, abs=1e-8
    )


# --------------------------------------------------------------------------
# tables and projection
# --------------------------------------------------------------------------


def test_variable_table_invariants():
    with pytest.raises(ValueError):
        VariableTable(())
    with pytest.raises(ValueError):
        VariableTable(("x1", "x1"))
    t = VariableTable.create(2, 1)
    assert t.n == 2 and t.m == 1 and t.size == 3
    assert t.name(2) == "varsigma1"
    assert t.is_noise(2) and not t.is_noise(0)


def test_project_to_state_and_embed():
    joint = VariableTable.create(2, 1)
    p = parse_polynomial("x1^2 + 2*x2", joint)
    state = p.project_to_state()
    assert state.table.size == 2
    assert state == poly("x1^2 + 2*x2")
    assert state.embed(joint) == p
    with_noise = parse_polynomial("x1 + varsigma1", joint)
    with pytest.raises(DimensionMismatchError):
        with_noise.project_to_state()


def test_to_fraction_exact_decimal_strings():
    assert to_fraction("0.1") == Fraction(1, 10)
    assert to_fraction("3.6e-3") == Fraction(9, 2500)
    assert to_fraction(0.5) == Fraction(1, 2)
