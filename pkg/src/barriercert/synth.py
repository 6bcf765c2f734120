"""Barrier synthesis for the four system classes.

Assembles the level-set and flow conditions as one SOS program per class,
solves the compiled SDP, validates the returned certificate independently,
and computes the probabilistic safety confidence for stochastic classes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidCertificateError,
    NonpositiveLambdaError,
)
from .moments import expect_over_noise
from .poly import Monomial, Polynomial, VariableTable, to_fraction
from .sdp import (
    SdpSolution,
    SolveOptions,
    SolveStatus,
    check_gram_psd,
    refine_solution,
    solve_sdp,
)
from .sos import (
    LinExpr,
    PolyLin,
    SemiAlgebraicSet,
    SosProgram,
    box_to_semialgebraic,
    compile_to_sdp,
    gram_polynomial,
)
from .systems import (
    Box,
    Certificate,
    ClauseCheck,
    CtDs,
    CtSs,
    DtDs,
    DtSs,
    Mode,
    SafetyProblem,
    SynthArtifacts,
    SynthOutcome,
    SynthStatus,
    SystemSpec,
    ValidationReport,
)


@dataclass
class SynthOptions:
    feas_tol: float = 1e-8
    max_iter: int = 200
    time_limit: float | None = None
    normalize: bool = True
    validate: bool = True
    polish: bool = True
    samples: int = 10_000
    sample_tol: float = 1e-6
    gram_tol: float = 1e-6
    recon_tol: float = 1e-6
    seed: int = 2024
    cancel_token: object | None = None
    verbose: bool = False


# --------------------------------------------------------------------------
# scalar confidence bound
# --------------------------------------------------------------------------


def confidence_bound(gamma: float, lam: float, c: float, horizon: float) -> float:
    """Lower bound on the probability of avoiding the unsafe set over the
    horizon: clamp(1 - (gamma + c*T) / lambda, 0, 1)."""
    if lam <= 0:
        raise NonpositiveLambdaError(f"lambda must be > 0, got {lam}")
    if gamma < 0 or c < 0 or horizon < 0:
        raise ValueError("gamma, c and the horizon must be >= 0")
    return min(1.0, max(0.0, 1.0 - (gamma + c * horizon) / lam))


# --------------------------------------------------------------------------
# symbolic operators (numeric barrier)
# --------------------------------------------------------------------------


def lie_derivative(B: Polynomial, f: Sequence[Polynomial]) -> Polynomial:
    """Directional derivative of B along the vector field f."""
    table = B.table
    if len(f) != table.n:
        raise DimensionMismatchError(f"{len(f)} field entries for {table.n} states")
    total = Polynomial.zero(table)
    for i, fi in enumerate(f):
        if fi.table != table:
            raise DimensionMismatchError("vector field over a different table")
        total = total + B.differentiate(i) * fi
    return total


def infinitesimal_generator(B: Polynomial, system: CtSs) -> Polynomial:
    """Generator of the jump-diffusion applied to B: drift transport, half the
    diffusion trace against the Hessian, and rate-weighted jump differences."""
    table = system.table
    if B.table != table:
        raise DimensionMismatchError("barrier over a different table")
    total = lie_derivative(B, system.drift)
    n, b = table.n, system.b
    if b:
        half = Fraction(1, 2)
        for i in range(n):
            for k in range(n):
                # (diffusion @ diffusion^T)[i, k]
                dd = Polynomial.zero(table)
                for l in range(b):
                    dd = dd + system.diffusion[i][l] * system.diffusion[k][l]
                if dd.is_zero():
                    continue
                total = total + (dd * B.differentiate(i).differentiate(k)).scale(half)
    for j in range(system.r):
        rate = system.rates[j]
        if rate == 0:
            continue
        jumped = B.substitute({
            i: Polynomial.variable(table, i) + system.reset[i][j] for i in range(n)
        })
        total = total + (jumped - B).scale(rate)
    return total


def compose_with_map(B: Polynomial, maps: Sequence[Polynomial]) -> Polynomial:
    """B(f(x, .)): substitute the map entries for the state variables of B.
    B must be state-only; the result lives over the maps' table."""
    target = maps[0].table
    if len(maps) != B.table.n:
        raise DimensionMismatchError(f"{len(maps)} map entries for {B.table.n} states")
    cache: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, e: int) -> Polynomial:
        key = (i, e)
        if key not in cache:
            cache[key] = maps[i] ** e
        return cache[key]

    total = Polynomial.zero(target)
    for mono, coeff in B.terms.items():
        exps = mono.exponents()
        if any(i >= B.table.n for i in exps):
            raise DimensionMismatchError("barrier contains noise variables")
        term = Polynomial.constant(target, coeff)
        for i, e in exps.items():
            term = term * power(i, e)
        total = total + term
    return total


def expected_next(B: Polynomial, system: DtSs) -> Polynomial:
    """E[B(f(x, noise)) | x] as a state-only polynomial."""
    composed = compose_with_map(B, system.f)
    return expect_over_noise(composed, system.noise).project_to_state()


# --------------------------------------------------------------------------
# normalization: affine change of coordinates onto the unit box
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _BoxTransform:
    """y = (x - center) / halfwidth, exactly invertible; degenerate
    dimensions (halfwidth 0) keep unit scale."""

    center: tuple[Fraction, ...]
    halfwidth: tuple[Fraction, ...]

    @staticmethod
    def for_problem(prob: SafetyProblem) -> "_BoxTransform":
        halves = tuple(h if h != 0 else Fraction(1) for h in prob.space.halfwidth())
        return _BoxTransform(prob.space.center(), halves)

    def x_of_y(self, table: VariableTable) -> dict[int, Polynomial]:
        return {
            i: Polynomial.variable(table, i).scale(self.halfwidth[i]) + self.center[i]
            for i in range(len(self.center))
        }

    def box(self, box: Box) -> Box:
        lower = tuple(
            (lo - m) / h for lo, m, h in zip(box.lower, self.center, self.halfwidth)
        )
        upper = tuple(
            (hi - m) / h for hi, m, h in zip(box.upper, self.center, self.halfwidth)
        )
        return Box(lower, upper)

    def barrier_to_original(self, B: Polynomial) -> Polynomial:
        table = B.table
        bindings = {
            i: (Polynomial.variable(table, i) - self.center[i]).scale(1 / self.halfwidth[i])
            for i in range(table.n)
        }
        return B.substitute(bindings)


def _normalize(system: SystemSpec, prob: SafetyProblem):
    tf = _BoxTransform.for_problem(prob)
    table = system.table
    x_of_y = tf.x_of_y(table)
    n = table.n

    def pull(p: Polynomial) -> Polynomial:
        return p.substitute(x_of_y)

    if isinstance(system, DtSs):
        f = tuple(
            (pull(fi) - tf.center[i]).scale(1 / tf.halfwidth[i])
            for i, fi in enumerate(system.f)
        )
        new_system: SystemSpec = DtSs(f, system.noise, table)
    elif isinstance(system, DtDs):
        f = tuple(
            (pull(fi) - tf.center[i]).scale(1 / tf.halfwidth[i])
            for i, fi in enumerate(system.f)
        )
        new_system = DtDs(f, table)
    elif isinstance(system, CtSs):
        drift = tuple(
            pull(fi).scale(1 / tf.halfwidth[i]) for i, fi in enumerate(system.drift)
        )
        diffusion = tuple(
            tuple(pull(entry).scale(1 / tf.halfwidth[i]) for entry in row)
            for i, row in enumerate(system.diffusion)
        )
        reset = tuple(
            tuple(pull(entry).scale(1 / tf.halfwidth[i]) for entry in row)
            for i, row in enumerate(system.reset)
        )
        new_system = CtSs(drift, diffusion, reset, system.rates, table)
    elif isinstance(system, CtDs):
        f = tuple(pull(fi).scale(1 / tf.halfwidth[i]) for i, fi in enumerate(system.f))
        new_system = CtDs(f, table)
    else:  # pragma: no cover
        raise TypeError(f"unknown system type {type(system)!r}")

    new_prob = replace(
        prob,
        space=tf.box(prob.space),
        initial=tf.box(prob.initial),
        unsafe=tuple(tf.box(u) for u in prob.unsafe),
    )
    return new_system, new_prob, tf


# --------------------------------------------------------------------------
# program assembly
# --------------------------------------------------------------------------


def _flow_poly_lin(system: SystemSpec, B_coeffs: Mapping[Monomial, LinExpr],
                   basis: Sequence[Monomial], table: VariableTable) -> PolyLin:
    """The class-specific one-step / generator expression applied to the
    unknown barrier, by linearity over its coefficient forms:

    dt-SS: E[B(f(x, noise)) | x]     dt-DS: B(f(x))
    ct-SS: generator of B            ct-DS: Lie derivative of B
    """
    out = PolyLin(table)
    n = table.n

    if isinstance(system, (DtSs, DtDs)):
        maps = system.f
        power_products: dict[tuple[int, ...], Polynomial] = {
            Monomial.unit(table.size).powers: Polynomial.constant(table, 1)
        }
        for mono in basis:  # graded order: predecessors come first
            if mono.degree == 0:
                continue
            i = next(idx for idx, e in enumerate(mono.powers) if e)
            prev = list(mono.powers)
            prev[i] -= 1
            power_products[mono.powers] = power_products[tuple(prev)] * maps[i]
        for mono in basis:
            image = power_products[mono.powers]
            if isinstance(system, DtSs):
                image = expect_over_noise(image, system.noise)
            q = B_coeffs.get(mono)
            if q is None:
                continue
            for im, ic in image.terms.items():
                out.add_inplace(im, q.scale(ic))
        return out

    # continuous-time classes: apply the generator / Lie derivative monomial-wise
    for mono in basis:
        mono_poly = Polynomial(table, {mono: 1})
        if isinstance(system, CtSs):
            image = infinitesimal_generator(mono_poly, system)
        else:
            image = lie_derivative(mono_poly, system.f)
        q = B_coeffs.get(mono)
        if q is None or image.is_zero():
            continue
        for im, ic in image.terms.items():
            out.add_inplace(im, q.scale(ic))
    return out


@dataclass
class _BuildHandles:
    program: SosProgram
    barrier: object
    gamma: object
    lam: object
    c: object | None
    sets: dict[str, SemiAlgebraicSet]


def build_sos_program(system: SystemSpec, prob: SafetyProblem,
                      *, extra_space_inequalities: Sequence[Polynomial] = ()) -> _BuildHandles:
    """Assemble the class-appropriate SOS program (no solving).

    B is a free unknown polynomial of degree b_degree (SOS-constrained when
    prob.barrier_sos is set); one SOS multiplier vector per semi-algebraic
    set; the unsafe condition is repeated per region; scalar signs and the
    strict gap lambda - gamma >= eps_gap are linear constraints.
    """
    table = system.table
    n = table.n
    prog = SosProgram(table)
    barrier = prog.new_unknown_poly("B", n, prob.b_degree,
                                    sos_constrained=prob.barrier_sos)
    l_degree = prob.multiplier_degree

    gamma = prog.new_scalar("gamma", nonneg=True, pinned=prob.gam)
    lam_pin = prob.lam
    if prob.mode is Mode.TARGET_CONFIDENCE and lam_pin is None:
        lam_pin = Fraction(1)  # scale-invariant choice, documented default
    lam = prog.new_scalar("lambda", nonneg=True, pinned=lam_pin)
    c_var = None
    if system.is_stochastic:
        c_var = prog.new_scalar("c", nonneg=True, pinned=prob.c_val)

    prog.add_linear_constraint(
        LinExpr.of_var(lam.var_id) - LinExpr.of_var(gamma.var_id), ">=", prob.eps_gap
    )

    horizon = prob.horizon if system.is_stochastic else None
    if prob.mode is Mode.OPTIMIZE_CONFIDENCE:
        prog.minimize(LinExpr.of_var(gamma.var_id) + LinExpr.of_var(c_var.var_id).scale(horizon))
    elif prob.mode is Mode.TARGET_CONFIDENCE:
        budget = LinExpr.of_var(lam.var_id).scale(1 - to_fraction(prob.confidence_target))
        spent = LinExpr.of_var(gamma.var_id) + LinExpr.of_var(c_var.var_id).scale(horizon)
        prog.add_linear_constraint(budget - spent, ">=", 0)

    def box_set(box: Box) -> SemiAlgebraicSet:
        return box_to_semialgebraic(box.lower, box.upper, table, encoding=prob.box_encoding)

    space_set = box_set(prob.space)
    for g in extra_space_inequalities:
        space_set = space_set.with_extra(g)
    init_set = box_set(prob.initial)
    unsafe_sets = [box_set(u) for u in prob.unsafe]
    sets = {"space": space_set, "initial": init_set}

    def lagrangian(s: SemiAlgebraicSet, tag: str) -> PolyLin:
        acc = PolyLin.zero(table)
        for k, g in enumerate(s.inequalities):
            mult = prog.new_unknown_poly(f"l.{tag}.{k}", n, l_degree, sos_constrained=True)
            acc = acc + mult.poly_lin(table).mul_poly(g)
        return acc

    B_lin = barrier.poly_lin(table)

    # optional R+ codomain: certify B >= 0 on the state set via its own
    # multiplier vector (redundant when B is already globally SOS)
    if prob.barrier_nonneg and not prob.barrier_sos:
        prog.add_sos_constraint(
            B_lin - lagrangian(space_set, "nonneg"), "barrier_nonneg"
        )

    # initial level set: -B - l_i^T g_i + gamma is SOS
    prog.add_sos_constraint(
        B_lin.scale(-1) - lagrangian(init_set, "init")
        + PolyLin.zero(table).add_scalar(LinExpr.of_var(gamma.var_id)),
        "initial",
    )
    # unsafe level set, repeated per region: B - l_u^T g_u - lambda is SOS
    for j, us in enumerate(unsafe_sets):
        sets[f"unsafe{j}"] = us
        prog.add_sos_constraint(
            B_lin - lagrangian(us, f"unsafe{j}")
            + PolyLin.zero(table).add_scalar(LinExpr.of_var(lam.var_id).scale(-1)),
            f"unsafe{j}",
        )

    # flow condition on the state set
    flow = _flow_poly_lin(system, B_lin.coeffs, barrier.basis, table)
    if isinstance(system, (DtSs, DtDs)):
        expr = flow.scale(-1) + B_lin - lagrangian(space_set, "space")
    else:
        expr = flow.scale(-1) - lagrangian(space_set, "space")
    if c_var is not None:
        expr = expr.add_scalar(LinExpr.of_var(c_var.var_id))
    prog.add_sos_constraint(expr, "flow")

    return _BuildHandles(prog, barrier, gamma, lam, c_var, sets)


# --------------------------------------------------------------------------
# synthesis driver
# --------------------------------------------------------------------------


def _snap_decimal(value: float) -> Fraction:
    return Fraction(repr(float(value)))


def _barrier_from_solution(handles: _BuildHandles, solution: SdpSolution,
                           table: VariableTable) -> Polynomial:
    values = solution.variables
    inst = handles.barrier.poly_lin(table).instantiate(values)
    n = table.n
    state_table = VariableTable(table.state_names)
    terms = {}
    for mono, val in inst.items():
        terms[Monomial(mono.powers[:n])] = Fraction(val)
    return Polynomial(state_table, terms)


def _gram_floor(solution: SdpSolution) -> float:
    """Smallest eigenvalue over all returned PSD blocks (0 if none)."""
    floor = 0.0
    for M in solution.block_values.values():
        floor = min(floor, check_gram_psd(M, tol=math.inf).min_eigenvalue)
    return floor


def _reconstruction_error(program: SosProgram, problem, solution: SdpSolution) -> float:
    """Worst coefficient mismatch between z^T Q z and the instantiated
    constraint expressions."""
    worst = 0.0
    values = solution.variables
    for constraint, (_, block_index) in zip(program.sos_constraints,
                                            problem.constraint_blocks):
        block = problem.blocks[block_index]
        half = monomial_halfbasis_for(block, program)
        Q = solution.block_values[block.name]
        rebuilt = gram_polynomial(half, Q, program.table)
        target = constraint.expr.instantiate(values)
        for mono in set(rebuilt) | set(target):
            worst = max(worst, abs(rebuilt.get(mono, 0.0) - target.get(mono, 0.0)))
    return worst


def _solution_quality(program: SosProgram, problem, solution: SdpSolution,
                      gram_tol: float, recon_tol: float) -> tuple:
    """Sort key: fewest tolerance violations first, then deepest PSD floor."""
    floor = _gram_floor(solution)
    recon = _reconstruction_error(program, problem, solution)
    violation = max(0.0, (-floor - 0.5 * gram_tol) / gram_tol) + \
        max(0.0, (recon - 0.5 * recon_tol) / recon_tol)
    return (violation, -floor)


def _total_trace_expr(program: SosProgram) -> LinExpr:
    expr = LinExpr()
    for unknown in program.unknowns:
        if unknown.gram is not None:
            for i in range(unknown.gram.dim):
                expr = expr + LinExpr.of_var(unknown.gram.entry_id(i, i))
    return expr


def _polish_solution(handles: _BuildHandles, first: SdpSolution, first_problem,
                     solve_opts: SolveOptions, gram_tol: float,
                     recon_tol: float) -> tuple[SdpSolution, object, dict]:
    """Re-centre a degenerate optimal solution.

    Optimal certificates sit on the PSD boundary and the multiplier blocks can
    drift along unbounded rays, leaving slightly indefinite Grams. Pin the
    objective near its optimum, cap the total Gram trace near its minimum,
    then take the analytic-centre-style pure feasibility point of that bounded
    region: strictly interior, so the blocks pass the independent PSD check.
    The best of the three solutions by (violations, PSD floor) is kept.
    """
    program = handles.program
    info: dict = {"triggered": True, "phases": []}
    value = first.objective
    if program.objective is not None and value is not None:
        # wide enough for the re-solves to have an interior, narrow enough
        # that the reported levels move by less than reporting precision
        slack = 1e-4 * (1.0 + abs(value))
        program.add_linear_constraint(program.objective.scale(-1), ">=", -(value + slack))
        info["objective_cap"] = value + slack

    trace = _total_trace_expr(program)
    saved_objective = program.objective
    program.minimize(trace)
    problem2 = compile_to_sdp(program)
    second = solve_sdp(problem2, solve_opts)
    info["phases"].append(("min_trace", second.diagnostics.get("status_raw")))
    if not second.status.is_solved:
        program.objective = saved_objective
        return first, first_problem, info

    program.add_linear_constraint(trace.scale(-1), ">=", -(3.0 * second.objective + 1e-6))
    program.objective = None
    problem3 = compile_to_sdp(program)
    third = solve_sdp(problem3, solve_opts)
    info["phases"].append(("recentre", third.diagnostics.get("status_raw")))

    candidates = [(first, first_problem), (second, problem2)]
    if third.status.is_solved:
        candidates.append((third, problem3))
    best, best_problem = min(
        candidates,
        key=lambda pair: _solution_quality(program, pair[1], pair[0],
                                           gram_tol, recon_tol),
    )
    info["chosen_floor"] = _gram_floor(best)
    return best, best_problem, info


def synthesize(system: SystemSpec, prob: SafetyProblem,
               options: SynthOptions | None = None) -> SynthOutcome:
    """One-shot synthesis at prob.b_degree. Infeasible is a search outcome;
    InvalidProblem is raised for ill-posed inputs."""
    options = options or SynthOptions()
    prob.validate(system)
    started = time.perf_counter()

    work_system, work_prob, transform = (system, prob, None)
    if options.normalize:
        work_system, work_prob, transform = _normalize(system, prob)

    # solve at lambda = 1 when a larger lambda is pinned: the certificate
    # conditions are invariant under positive scaling of (B, gamma, lambda,
    # c), and unit-scale decision variables keep the interior-point method
    # well conditioned; results are scaled back exactly.
    level_scale: Fraction | None = None
    if work_prob.lam is not None and work_prob.lam not in (0, 1):
        level_scale = work_prob.lam
        work_prob = replace(
            work_prob,
            lam=Fraction(1),
            gam=None if work_prob.gam is None else work_prob.gam / level_scale,
            c_val=None if work_prob.c_val is None else work_prob.c_val / level_scale,
            eps_gap=work_prob.eps_gap / level_scale,
        )

    handles = build_sos_program(work_system, work_prob)
    problem = compile_to_sdp(handles.program)
    solve_opts = SolveOptions(
        feas_tol=options.feas_tol,
        max_iter=options.max_iter,
        time_limit=options.time_limit,
        verbose=options.verbose,
        cancel_token=options.cancel_token,
    )
    solution = solve_sdp(problem, solve_opts)

    polish_info: dict = {"triggered": False}
    if options.polish and solution.status.is_solved and (
        _gram_floor(solution) < -0.5 * options.gram_tol
        or _reconstruction_error(handles.program, problem, solution) > 0.5 * options.recon_tol
        or solution.diagnostics.get("reduced_accuracy")
    ):
        solution, problem, polish_info = _polish_solution(
            handles, solution, problem, solve_opts,
            options.gram_tol, options.recon_tol,
        )
    if solution.status.is_solved:
        refined = refine_solution(problem, solution)
        if refined is not solution:
            quality = _solution_quality(handles.program, problem, solution,
                                        options.gram_tol, options.recon_tol)
            refined_quality = _solution_quality(handles.program, problem, refined,
                                                options.gram_tol, options.recon_tol)
            if refined_quality < quality:
                solution = refined
                polish_info = dict(polish_info)
                polish_info["equality_projection"] = solution.diagnostics.get(
                    "equality_projection")
    wall = time.perf_counter() - started

    diagnostics = {
        "degree": prob.b_degree,
        "solver": solution.diagnostics,
        "n_vars": problem.n_vars,
        "n_rows": problem.n_rows,
        "n_blocks": len(problem.blocks),
        "normalized": options.normalize,
        "polish": polish_info,
        "wall_time": wall,
    }
    if solution.status is SolveStatus.INFEASIBLE:
        return SynthOutcome(SynthStatus.INFEASIBLE, diagnostics=diagnostics)
    if solution.status is SolveStatus.CANCELLED:
        return SynthOutcome(SynthStatus.CANCELLED, diagnostics=diagnostics)
    if not solution.status.is_solved:
        return SynthOutcome(SynthStatus.NUMERICAL_FAILURE, diagnostics=diagnostics)

    barrier_work = _barrier_from_solution(handles, solution, work_system.table)
    if level_scale is not None:
        barrier_work = barrier_work.scale(level_scale)
    barrier = transform.barrier_to_original(barrier_work) if transform else barrier_work
    barrier = Polynomial(
        barrier.table, {m: _snap_decimal(float(c)) for m, c in barrier.terms.items()}
    )

    gamma = solution.scalar_values["gamma"]
    lam = solution.scalar_values["lambda"]
    c = solution.scalar_values.get("c", 0.0)
    if level_scale is not None:
        gamma *= float(level_scale)
        lam *= float(level_scale)
        c *= float(level_scale)
    confidence = None
    if system.is_stochastic:
        confidence = confidence_bound(max(gamma, 0.0), lam, max(c, 0.0), prob.horizon)

    certificate = Certificate(
        barrier=barrier,
        gamma=gamma,
        lam=lam,
        c=c if system.is_stochastic else 0.0,
        confidence=confidence,
        degree=prob.b_degree,
        solve_diagnostics=diagnostics,
        wall_time=wall,
        artifacts=SynthArtifacts(handles.program, problem, solution,
                                 normalized=options.normalize),
    )

    if options.validate:
        report = validate_certificate(
            certificate, system, prob,
            samples=options.samples, tol=options.sample_tol,
            gram_tol=options.gram_tol, recon_tol=options.recon_tol,
            seed=options.seed,
        )
        certificate.validation = report
        if not report.ok:
            diagnostics["validation"] = report.to_dict()
            return SynthOutcome(SynthStatus.INVALID_CERTIFICATE, certificate, diagnostics)

    return SynthOutcome(SynthStatus.FEASIBLE, certificate, diagnostics)


def _require(system, cls, name):
    if not isinstance(system, cls):
        raise TypeError(f"{name} expects a {cls.__name__} system, got {type(system).__name__}")


def synth_dt_ss(system: DtSs, prob: SafetyProblem, options: SynthOptions | None = None) -> SynthOutcome:
    _require(system, DtSs, "synth_dt_ss")
    return synthesize(system, prob, options)


def synth_dt_ds(system: DtDs, prob: SafetyProblem, options: SynthOptions | None = None) -> SynthOutcome:
    _require(system, DtDs, "synth_dt_ds")
    return synthesize(system, prob, options)


def synth_ct_ss(system: CtSs, prob: SafetyProblem, options: SynthOptions | None = None) -> SynthOutcome:
    _require(system, CtSs, "synth_ct_ss")
    return synthesize(system, prob, options)


def synth_ct_ds(system: CtDs, prob: SafetyProblem, options: SynthOptions | None = None) -> SynthOutcome:
    _require(system, CtDs, "synth_ct_ds")
    return synthesize(system, prob, options)


# --------------------------------------------------------------------------
# certificate validation
# --------------------------------------------------------------------------


def class_condition_residual(certificate: Certificate, system: SystemSpec) -> Polynomial:
    """The class condition as a residual polynomial that must be <= c (or 0)
    on the state set: E[B next] - B, B(f) - B, generator, or Lie derivative."""
    B = certificate.barrier
    if isinstance(system, DtSs):
        return expected_next(B, system) - B
    if isinstance(system, DtDs):
        return compose_with_map(B, system.f) - B
    if isinstance(system, CtSs):
        return infinitesimal_generator(B.embed(system.table), system)
    return lie_derivative(B.embed(system.table), system.f)


def validate_certificate(certificate: Certificate, system: SystemSpec,
                         prob: SafetyProblem, *, samples: int = 10_000,
                         tol: float = 1e-6, gram_tol: float = 1e-6,
                         recon_tol: float = 1e-6, seed: int = 2024) -> ValidationReport:
    """Independent check of a numeric certificate.

    (a) every Gram block is PSD (eigendecomposition, not the solver);
    (b) z^T Q z rebuilt from each constraint Gram matches the instantiated
        constraint expression coefficient-wise;
    (c) sampled level-set and class conditions on the problem's boxes.

    Raises InvalidCertificateError for structural violations (level-set order,
    scalar signs); sampled/numeric violations are reported in the clauses.
    """
    gamma, lam, c = certificate.gamma, certificate.lam, certificate.c
    eps = float(prob.eps_gap)
    # strict gap check, allowing interior-point slop on the gap constraint
    if lam - gamma < 0.5 * eps:
        raise InvalidCertificateError("level-set order",
                                      f"lambda - gamma = {lam - gamma} < eps_gap {eps}")
    if gamma < -tol or lam < -tol or c < -tol:
        raise InvalidCertificateError("scalar signs",
                                      f"gamma={gamma}, lambda={lam}, c={c}")
    if not system.is_stochastic and c != 0.0:
        raise InvalidCertificateError("deterministic c", f"c must be 0, got {c}")

    clauses: list[ClauseCheck] = []

    artifacts = certificate.artifacts
    if artifacts is not None:
        solution = artifacts.solution
        worst_eig = math.inf
        ok_psd = True
        for name, M in solution.block_values.items():
            res = check_gram_psd(M, tol=gram_tol)
            worst_eig = min(worst_eig, res.min_eigenvalue)
            ok_psd = ok_psd and res.ok
        clauses.append(ClauseCheck("gram_psd", ok_psd, worst_eig,
                                   f"{len(solution.block_values)} blocks"))

        problem = artifacts.problem
        program = artifacts.program
        worst_recon = _reconstruction_error(program, problem, solution)
        clauses.append(ClauseCheck("reconstruction", worst_recon <= recon_tol,
                                   worst_recon,
                                   f"{len(problem.constraint_blocks)} constraints"))
    else:
        clauses.append(ClauseCheck("gram_psd", True, None, "skipped: no solver artifacts"))
        clauses.append(ClauseCheck("reconstruction", True, None,
                                   "skipped: no solver artifacts"))

    rng = np.random.default_rng(seed)
    B = certificate.barrier

    init_pts = prob.initial.sample(rng, samples)
    init_vals = B.evaluate_batch(init_pts)
    init_margin = float(np.max(init_vals) - gamma)
    clauses.append(ClauseCheck("initial_level", init_margin <= tol, init_margin,
                               "max B - gamma on X_initial"))

    for j, unsafe in enumerate(prob.unsafe):
        pts = unsafe.sample(rng, samples)
        vals = B.evaluate_batch(pts)
        margin = float(lam - np.min(vals))
        clauses.append(ClauseCheck(f"unsafe_level[{j}]", margin <= tol, margin,
                                   "lambda - min B on the unsafe region"))

    space_pts = prob.space.sample(rng, samples)
    residual = class_condition_residual(certificate, system)
    if residual.table.size != B.table.size:
        residual = residual.project_to_state()
    res_vals = residual.evaluate_batch(space_pts)
    bound = c if system.is_stochastic else 0.0
    flow_margin = float(np.max(res_vals) - bound)
    clauses.append(ClauseCheck("flow_condition", flow_margin <= tol, flow_margin,
                               f"max residual - {'c' if system.is_stochastic else '0'} on X"))

    ok = all(cl.ok for cl in clauses)
    return ValidationReport(ok, clauses, samples, tol, seed)


def monomial_halfbasis_for(block, program) -> tuple:
    """Recover the Gram half-basis a compiled constraint block used."""
    from .poly import monomial_basis

    # block.dim = C(n + h, h) identifies h uniquely for the program's n
    n = program.table.n
    h = 0
    while math.comb(n + h, h) != block.dim:
        h += 1
        if h > 64:
            raise ValueError(f"cannot infer half-basis degree for block dim {block.dim}")
    return tuple(monomial_basis(n, h, size=program.table.size))
