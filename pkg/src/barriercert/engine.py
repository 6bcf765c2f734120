"""Degree-portfolio search: serial and parallel construction of certificates.

One worker per even degree. Deterministic classes race: the first feasible
certificate cancels the remaining workers. Stochastic classes run every
degree to completion and keep the certificate with the highest confidence
(ties: lowest degree, then lowest gamma). Workers are separate processes;
they share only a result queue, and a worker failure is a message, never a
hang.
"""

from __future__ import annotations

import multiprocessing
import os
import queue as queue_mod
import time
import traceback
from dataclasses import dataclass, replace

from .errors import InvalidProblemError
from .systems import SafetyProblem, SynthOutcome, SystemSpec
from .synth import SynthOptions, synthesize

POLICY_FIRST_FEASIBLE = "deterministic-first-feasible"
POLICY_BEST_CONFIDENCE = "stochastic-best-confidence"


@dataclass(frozen=True)
class SearchPlan:
    """Even ascending degrees plus the termination policy (None = by class)."""

    degrees: tuple[int, ...]
    policy: str | None = None

    def __post_init__(self):
        if not self.degrees:
            raise InvalidProblemError("search plan needs at least one degree")
        if any(d < 2 or d % 2 for d in self.degrees):
            raise InvalidProblemError(f"degrees must be even and >= 2: {self.degrees}")
        if list(self.degrees) != sorted(set(self.degrees)):
            raise InvalidProblemError(f"degrees must be strictly ascending: {self.degrees}")
        if self.policy not in (None, POLICY_FIRST_FEASIBLE, POLICY_BEST_CONFIDENCE):
            raise InvalidProblemError(f"unknown policy {self.policy!r}")

    @staticmethod
    def up_to(max_degree: int) -> "SearchPlan":
        """Degrees {2, 4, ..., P} as in the parallel construction loop."""
        if max_degree < 2:
            raise InvalidProblemError("max degree must be >= 2")
        return SearchPlan(tuple(range(2, max_degree + 1, 2)))

    def resolve_policy(self, system: SystemSpec) -> str:
        if self.policy is not None:
            return self.policy
        return POLICY_BEST_CONFIDENCE if system.is_stochastic else POLICY_FIRST_FEASIBLE


@dataclass
class DegreeRecord:
    degree: int
    status: str
    gamma: float | None = None
    lam: float | None = None
    c: float | None = None
    confidence: float | None = None
    wall_time: float = 0.0
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "status": self.status,
            "gamma": self.gamma,
            "lambda": self.lam,
            "c": self.c,
            "confidence": self.confidence,
            "wall_time": self.wall_time,
            "detail": self.detail,
        }


@dataclass
class SearchResult:
    status: str  # "feasible" | "infeasible" | "cancelled"
    certificate: object | None
    records: list[DegreeRecord]
    policy: str
    wall_time: float
    winner_degree: int | None = None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def record_for(self, degree: int) -> DegreeRecord:
        for r in self.records:
            if r.degree == degree:
                return r
        raise KeyError(degree)


def _record_from_outcome(degree: int, outcome: SynthOutcome, wall: float) -> DegreeRecord:
    cert = outcome.certificate
    return DegreeRecord(
        degree=degree,
        status=outcome.status.value,
        gamma=cert.gamma if cert else None,
        lam=cert.lam if cert else None,
        c=cert.c if cert else None,
        confidence=cert.confidence if cert else None,
        wall_time=wall,
        detail=str(outcome.diagnostics.get("solver", {}).get("status_raw", "")),
    )


def _pick_best(feasible: list[tuple[DegreeRecord, object]]):
    """Highest confidence, ties by lowest degree then lowest gamma."""
    def key(pair):
        record, cert = pair
        phi = cert.confidence if cert.confidence is not None else 1.0
        return (-phi, record.degree, cert.gamma)

    return min(feasible, key=key)


def _finalize(records: dict[int, DegreeRecord], certs: dict[int, object],
              plan: SearchPlan, policy: str, started: float,
              cancelled: bool = False) -> SearchResult:
    ordered = [records[d] for d in plan.degrees if d in records]
    feasible = [(records[d], certs[d]) for d in certs]
    wall = time.perf_counter() - started
    if feasible:
        record, cert = _pick_best(feasible)
        return SearchResult("feasible", cert, ordered, policy, wall, record.degree)
    status = "cancelled" if cancelled else "infeasible"
    return SearchResult(status, None, ordered, policy, wall, None)


def serial_search(system: SystemSpec, prob: SafetyProblem, plan: SearchPlan,
                  options: SynthOptions | None = None) -> SearchResult:
    """Degrees attempted in ascending order. Deterministic policy stops at the
    first feasible degree; stochastic policy evaluates all and keeps the best
    confidence."""
    options = options or SynthOptions()
    policy = plan.resolve_policy(system)
    records: dict[int, DegreeRecord] = {}
    certs: dict[int, object] = {}
    started = time.perf_counter()
    for degree in plan.degrees:
        t0 = time.perf_counter()
        outcome = synthesize(system, replace(prob, b_degree=degree), options)
        wall = time.perf_counter() - t0
        records[degree] = _record_from_outcome(degree, outcome, wall)
        if outcome.feasible:
            certs[degree] = outcome.certificate
            if policy == POLICY_FIRST_FEASIBLE:
                break
    return _finalize(records, certs, plan, policy, started)


def _degree_worker(result_queue, system, prob, degree, options):
    started = time.perf_counter()
    try:
        try:  # fork safety: collapse any inherited BLAS thread pools
            import threadpoolctl

            threadpoolctl.threadpool_limits(1)
        except Exception:
            pass
        outcome = synthesize(system, replace(prob, b_degree=degree), options)
        result_queue.put((degree, outcome, time.perf_counter() - started, None))
    except Exception:  # noqa: BLE001 - failure must become a message
        result_queue.put((degree, None, time.perf_counter() - started,
                          traceback.format_exc()))


def parallel_search(system: SystemSpec, prob: SafetyProblem, plan: SearchPlan,
                    options: SynthOptions | None = None,
                    cancel_token=None,
                    max_workers: int | None = None) -> SearchResult:
    """One worker process per degree, up to min(len(degrees), cpu count).

    Deterministic policy: the first worker returning Feasible terminates all
    others (they are recorded as cancelled). Stochastic policy: all workers
    run to completion and the feasible certificate with the highest
    confidence wins."""
    options = options or SynthOptions()
    prob.validate(system)
    policy = plan.resolve_policy(system)

    worker_options = replace(options, cancel_token=None)
    # spawn: workers must not inherit solver/BLAS thread-pool state
    ctx = multiprocessing.get_context("spawn")
    result_queue = ctx.Queue()
    workers = max_workers or min(len(plan.degrees), os.cpu_count() or 1)

    pending = list(plan.degrees)
    running: dict[int, multiprocessing.Process] = {}
    records: dict[int, DegreeRecord] = {}
    certs: dict[int, object] = {}
    started = time.perf_counter()
    cancelled_outer = False
    stop_started = False

    def start_next():
        if not pending:
            return
        degree = pending.pop(0)
        proc = ctx.Process(
            target=_degree_worker,
            args=(result_queue, system, prob, degree, worker_options),
            daemon=True,
        )
        proc.start()
        running[degree] = proc

    def stop_all(reason: str):
        for degree, proc in list(running.items()):
            proc.terminate()
            proc.join()
            records.setdefault(degree, DegreeRecord(degree, "cancelled", detail=reason))
            running.pop(degree, None)
        for degree in pending:
            records.setdefault(degree, DegreeRecord(degree, "cancelled", detail=reason))
        pending.clear()

    for _ in range(workers):
        start_next()

    while running or pending:
        if cancel_token is not None and cancel_token.is_set():
            cancelled_outer = True
            stop_all("search cancelled")
            break
        try:
            degree, outcome, wall, error = result_queue.get(timeout=0.05)
        except queue_mod.Empty:
            # reap workers that died without reporting
            for degree, proc in list(running.items()):
                if not proc.is_alive():
                    proc.join()
                    running.pop(degree, None)
                    records.setdefault(degree, DegreeRecord(
                        degree, "numerical_failure",
                        detail=f"worker exited with code {proc.exitcode}"))
                    if not stop_started:
                        start_next()
            continue

        proc = running.pop(degree, None)
        if proc is not None:
            proc.join()
        if error is not None:
            records[degree] = DegreeRecord(degree, "numerical_failure", detail=error)
        else:
            records[degree] = _record_from_outcome(degree, outcome, wall)
            if outcome.feasible:
                certs[degree] = outcome.certificate
                if policy == POLICY_FIRST_FEASIBLE:
                    stop_started = True
                    stop_all("feasible certificate found at another degree")
                    break
        if not stop_started:
            start_next()

    return _finalize(records, certs, plan, policy, started, cancelled=cancelled_outer)
