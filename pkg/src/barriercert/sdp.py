"""Backend contract for solving compiled SDPs, plus independent PSD checks.

The single native backend is Clarabel (interior-point conic solver). The
compiled problem's Gram blocks become PSD-triangle cones on slack variables
tied to the decision vector; coefficient-matching rows become a zero cone.
`check_gram_psd` deliberately uses a LAPACK eigendecomposition so certificate
validation does not trust the solver's own feasibility report.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from scipy import sparse

from .errors import NotSymmetricError
from .sos import SdpProblem

_SQRT2 = math.sqrt(2.0)


class CancelToken(Protocol):
    def is_set(self) -> bool: ...


class SolveStatus(enum.Enum):
    FEASIBLE = "feasible"
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    NUMERICAL_FAILURE = "numerical_failure"
    CANCELLED = "cancelled"

    @property
    def is_solved(self) -> bool:
        return self in (SolveStatus.FEASIBLE, SolveStatus.OPTIMAL)


@dataclass
class SolveOptions:
    feas_tol: float = 1e-8
    max_iter: int = 200
    time_limit: float | None = None
    verbose: bool = False
    cancel_token: CancelToken | None = None


@dataclass
class SdpSolution:
    status: SolveStatus
    block_values: dict[str, np.ndarray] = field(default_factory=dict)
    scalar_values: dict[str, float] = field(default_factory=dict)
    objective: float | None = None
    variables: np.ndarray | None = None  # full decision vector
    diagnostics: dict = field(default_factory=dict)


def _build_conic_data(problem: SdpProblem, row_scales: np.ndarray | None):
    import clarabel

    n = problem.n_vars
    n_eq = problem.n_rows
    rows_i: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    b = np.zeros(n_eq + sum(bl.dim * (bl.dim + 1) // 2 for bl in problem.blocks))

    for r, row in enumerate(problem.rows):
        scale = 1.0 if row_scales is None else row_scales[r]
        for vid, coeff in row.entries:
            rows_i.append(r)
            cols.append(vid)
            vals.append(coeff * scale)
        b[r] = row.rhs * scale

    cones = [clarabel.ZeroConeT(n_eq)] if n_eq else []
    r = n_eq
    for block in problem.blocks:
        d = block.dim
        k = 0
        for j in range(d):
            for i in range(j + 1):
                vid = block.entry_ids[j * (j + 1) // 2 + i]
                scale = 1.0 if i == j else _SQRT2
                rows_i.append(r + k)
                cols.append(vid)
                vals.append(-scale)
                k += 1
        cones.append(clarabel.PSDTriangleConeT(d))
        r += d * (d + 1) // 2

    A = sparse.csc_matrix(
        (vals, (rows_i, cols)), shape=(r, n)
    )
    P = sparse.csc_matrix((n, n))
    q = np.zeros(n)
    for vid, coeff in problem.objective:
        q[vid] = coeff
    return P, q, A, b, cones


def _extract(problem: SdpProblem, x: np.ndarray) -> tuple[dict, dict]:
    block_values: dict[str, np.ndarray] = {}
    for block in problem.blocks:
        d = block.dim
        M = np.empty((d, d))
        for j in range(d):
            for i in range(j + 1):
                v = x[block.entry_ids[j * (j + 1) // 2 + i]]
                M[i, j] = v
                M[j, i] = v
        block_values[block.name] = M
    scalar_values = {name: float(x[vid]) for name, vid in problem.scalar_vars}
    return block_values, scalar_values


_STATUS_NUMERICAL = {"MaxIterations", "MaxTime", "NumericalError", "InsufficientProgress"}


def solve_sdp(problem: SdpProblem, opts: SolveOptions | None = None) -> SdpSolution:
    """Solve the compiled problem with the native interior-point backend.

    Deterministic for fixed options. A numerical failure triggers exactly one
    automatic retry with Jacobi scaling of the equality rows. Cooperative
    cancellation is honored between solver iterations and reported as
    Cancelled. NumericalFailure signals ill-conditioning, not infeasibility.
    """
    opts = opts or SolveOptions()
    if problem.n_vars == 0 and problem.n_rows == 0:
        return SdpSolution(SolveStatus.FEASIBLE, objective=0.0,
                           variables=np.zeros(0),
                           diagnostics={"iterations": 0, "solve_time": 0.0})
    if opts.cancel_token is not None and opts.cancel_token.is_set():
        return SdpSolution(SolveStatus.CANCELLED, diagnostics={"iterations": 0})

    solution = _solve_once(problem, opts, row_scales=None)
    if solution.status is SolveStatus.NUMERICAL_FAILURE:
        scales = _jacobi_row_scales(problem)
        retry = _solve_once(problem, opts, row_scales=scales)
        retry.diagnostics["retried_with_jacobi_scaling"] = True
        retry.diagnostics["first_attempt_status"] = solution.diagnostics.get("status_raw")
        return retry
    return solution


def _jacobi_row_scales(problem: SdpProblem) -> np.ndarray:
    scales = np.ones(problem.n_rows)
    for r, row in enumerate(problem.rows):
        mags = [abs(c) for _, c in row.entries] + [abs(row.rhs)]
        peak = max(mags) if mags else 1.0
        if peak > 0:
            scales[r] = 1.0 / peak
    return scales


def _solve_once(problem: SdpProblem, opts: SolveOptions,
                row_scales: np.ndarray | None) -> SdpSolution:
    import clarabel

    P, q, A, b, cones = _build_conic_data(problem, row_scales)
    settings = clarabel.DefaultSettings()
    settings.verbose = opts.verbose
    settings.max_iter = opts.max_iter
    settings.tol_feas = opts.feas_tol
    # parallelism lives at per-degree granularity, not inside one SDP; a
    # single-threaded solve is also immune to thread-pool state across forks
    settings.max_threads = 1
    if opts.time_limit is not None:
        settings.time_limit = opts.time_limit
    solver = clarabel.DefaultSolver(P, q, A, b, cones, settings)

    token = opts.cancel_token
    if token is not None:
        solver.set_termination_callback(lambda info: token.is_set())

    started = time.perf_counter()
    result = solver.solve()
    wall = time.perf_counter() - started

    raw = str(result.status)
    diagnostics = {
        "status_raw": raw,
        "iterations": int(result.iterations),
        "solve_time": float(result.solve_time),
        "wall_time": wall,
        "r_prim": float(result.r_prim),
        "r_dual": float(result.r_dual),
    }

    if raw == "CallbackTerminated":
        return SdpSolution(SolveStatus.CANCELLED, diagnostics=diagnostics)
    if raw in ("PrimalInfeasible", "AlmostPrimalInfeasible"):
        return SdpSolution(SolveStatus.INFEASIBLE, diagnostics=diagnostics)
    if raw in ("DualInfeasible", "AlmostDualInfeasible"):
        return SdpSolution(SolveStatus.UNBOUNDED, diagnostics=diagnostics)
    if raw in ("Solved", "AlmostSolved"):
        if raw == "AlmostSolved":
            diagnostics["reduced_accuracy"] = True
        x = np.asarray(result.x)
        block_values, scalar_values = _extract(problem, x)
        objective = float(result.obj_val) if problem.objective else None
        status = SolveStatus.OPTIMAL if problem.objective else SolveStatus.FEASIBLE
        diagnostics["duality_gap"] = abs(float(result.obj_val) - float(result.obj_val_dual))
        return SdpSolution(status, block_values, scalar_values, objective, x, diagnostics)
    if raw in _STATUS_NUMERICAL:
        return SdpSolution(SolveStatus.NUMERICAL_FAILURE, diagnostics=diagnostics)
    return SdpSolution(SolveStatus.NUMERICAL_FAILURE, diagnostics=diagnostics)


def refine_solution(problem: SdpProblem, solution: SdpSolution) -> SdpSolution:
    """Orthogonal projection of the decision vector onto the equality rows.

    Interior-point iterates satisfy the coefficient-matching rows only up to
    the feasibility tolerance; the minimum-norm correction removes that
    residual (reconstruction error drops to rounding level) while moving the
    Gram blocks by at most the correction norm."""
    if solution.variables is None or not problem.rows:
        return solution
    from scipy.sparse import linalg as sparse_linalg

    rows_i: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    rhs = np.empty(problem.n_rows)
    for r, row in enumerate(problem.rows):
        for vid, coeff in row.entries:
            rows_i.append(r)
            cols.append(vid)
            vals.append(coeff)
        rhs[r] = row.rhs
    A = sparse.csr_matrix((vals, (rows_i, cols)),
                          shape=(problem.n_rows, problem.n_vars))
    x = solution.variables
    residual = A @ x - rhs
    norm = float(np.linalg.norm(residual))
    if norm < 1e-13:
        return solution
    delta = sparse_linalg.lsqr(A, -residual, atol=1e-14, btol=1e-14)[0]
    refined = x + delta
    block_values, scalar_values = _extract(problem, refined)
    diagnostics = dict(solution.diagnostics)
    diagnostics["equality_projection"] = {"residual_before": norm,
                                          "correction_norm": float(np.linalg.norm(delta))}
    objective = solution.objective
    if problem.objective:
        objective = float(sum(coeff * refined[vid] for vid, coeff in problem.objective))
    return SdpSolution(solution.status, block_values, scalar_values,
                       objective, refined, diagnostics)


@dataclass(frozen=True)
class PsdCheck:
    ok: bool
    min_eigenvalue: float


def check_gram_psd(matrix, tol: float = 1e-6) -> PsdCheck:
    """Post-hoc PSD validation: ok iff min eigenvalue >= -tol, via a symmetric
    eigendecomposition independent of the solver."""
    M = np.asarray(matrix, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {M.shape}")
    if M.size and np.max(np.abs(M - M.T)) > 1e-10:
        raise NotSymmetricError("matrix is not symmetric within 1e-10")
    if M.size == 0:
        return PsdCheck(True, 0.0)
    eigs = np.linalg.eigvalsh(0.5 * (M + M.T))
    min_eig = float(eigs[0])
    return PsdCheck(min_eig >= -tol, min_eig)
