"""Benchmark system builders shared across test modules."""

from fractions import Fraction

from barriercert.moments import NoiseSpec
from barriercert.poly import Polynomial, VariableTable, parse_polynomial
from barriercert.systems import Box, CtDs, CtSs, DtDs, DtSs, Mode, SafetyProblem

T2 = VariableTable.create(2)
T1 = VariableTable.create(1)


def p2(text):
    return parse_polynomial(text, T2)


# --------------------------------------------------------------------------
# benchmark systems used across tests
# --------------------------------------------------------------------------


def dc_motor():
    # sampling time 0.01, R/L = 100, k_dc/L = 1, k_dc/J = 1, b/J = 100
    f = (p2("x1 + 0.01*(-100*x1 - 1*x2)"), p2("x2 + 0.01*(1*x1 - 100*x2)"))
    system = DtDs(f, T2)
    prob = SafetyProblem(
        space=Box.of([0.1, 0.1], [0.5, 1.0]),
        initial=Box.of([0.1, 0.1], [0.4, 1.0]),
        unsafe=(Box.of([0.45, 0.6], [0.5, 1.0]),),
        b_degree=2,
    )
    return system, prob


def jet_engine():
    f = (p2("-x2 - 1.5*x1^2 - 0.5*x1^3"), p2("x1"))
    system = CtDs(f, T2)
    prob = SafetyProblem(
        space=Box.of([0.1, 0.1], [1.0, 1.0]),
        initial=Box.of([0.1, 0.1], [0.5, 0.5]),
        unsafe=(Box.of([0.7, 0.7], [1.0, 1.0]),),
        b_degree=2,
    )
    return system, prob


def one_d_system():
    # x+ = x + 5*(15 - x + 0.00036*(55 - x))
    table = T1
    f = (parse_polynomial("x1 + 5*(15 - x1 + 0.00036*(55 - x1))", table),)
    system = DtDs(f, table)
    prob = SafetyProblem(
        space=Box.of([-6], [6]),
        initial=Box.of([-0.5], [0.5]),
        unsafe=(Box.of([-6], [-5]),),
        b_degree=2,
    )
    return system, prob


def two_tanks():
    joint = VariableTable.create(2, 2)
    f = (
        parse_polynomial("0.9*x1 + 0.45 + varsigma1", joint),
        parse_polynomial("0.1*x1 + 0.9*x2 - 0.3 + varsigma2", joint),
    )
    system = DtSs(f, NoiseSpec.normal([0, 0], [0.01, 0.01]), joint)
    prob = SafetyProblem(
        space=Box.of([1, 1], [10, 10]),
        initial=Box.of([1.75, 1.75], [2.25, 2.25]),
        unsafe=(Box.of([9, 9], [10, 10]),),
        horizon=5,
        mode=Mode.OPTIMIZE_CONFIDENCE,
        b_degree=4,
        lam=Fraction(10),
    )
    return system, prob


def nonlinear_diffusion():
    # dx1 = x2 dt; dx2 = (-x1 - x2 - 0.5 x1^3) dt + 0.5 dW
    drift = (p2("x2"), p2("-x1 - x2 - 0.5*x1^3"))
    diffusion = ((p2("0"),), (p2("0.5"),))
    system = CtSs.create(drift, T2, diffusion=diffusion)
    prob = SafetyProblem(
        space=Box.of([-3, -3], [3, 3]),
        initial=Box.of([-1, -1], [1, 1]),
        unsafe=(Box.of([-3, 2.25], [3, 3]),),
        horizon=5,
        mode=Mode.OPTIMIZE_CONFIDENCE,
        b_degree=4,
        lam=Fraction(10),
    )
    return system, prob


