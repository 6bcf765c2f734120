"""Result documents and the config-to-result execution path."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from . import __version__ as TOOL_VERSION
from .config import RunConfig, build_system, load_config
from .engine import SearchPlan, SearchResult, parallel_search, serial_search
from .errors import BarrierCertError, ConfigError, InvalidProblemError
from .poly import Polynomial, VariableTable
from .synth import SynthOptions

EXIT_FEASIBLE = 0
EXIT_INFEASIBLE = 1
EXIT_INVALID_INPUT = 2
EXIT_FAILURE = 3


@dataclass
class RunResult:
    """Everything a solve run reports; serializes round-trip stable."""

    status: str  # feasible | infeasible | cancelled | invalid_input | failure
    mode: str | None = None
    name: str | None = None
    barrier: dict | None = None  # {"text": ..., "terms": [...], "dim": n}
    gamma: float | None = None
    lam: float | None = None
    c: float | None = None
    confidence: float | None = None
    degree: int | None = None
    policy: str | None = None
    per_degree: list[dict] = field(default_factory=list)
    validation: dict | None = None
    timings: dict = field(default_factory=dict)
    error: str | None = None
    plot: dict | None = None  # level-set grid for 2-D feasible certificates
    tool_version: str = TOOL_VERSION

    @property
    def exit_code(self) -> int:
        return {
            "feasible": EXIT_FEASIBLE,
            "infeasible": EXIT_INFEASIBLE,
            "invalid_input": EXIT_INVALID_INPUT,
        }.get(self.status, EXIT_FAILURE)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "mode": self.mode,
            "name": self.name,
            "barrier": self.barrier,
            "gamma": self.gamma,
            "lambda": self.lam,
            "c": self.c,
            "confidence": self.confidence,
            "degree": self.degree,
            "policy": self.policy,
            "per_degree": self.per_degree,
            "validation": self.validation,
            "timings": self.timings,
            "error": self.error,
            "plot": self.plot,
            "tool_version": self.tool_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @staticmethod
    def from_dict(data: dict) -> "RunResult":
        return RunResult(
            status=data["status"],
            mode=data.get("mode"),
            name=data.get("name"),
            barrier=data.get("barrier"),
            gamma=data.get("gamma"),
            lam=data.get("lambda"),
            c=data.get("c"),
            confidence=data.get("confidence"),
            degree=data.get("degree"),
            policy=data.get("policy"),
            per_degree=data.get("per_degree", []),
            validation=data.get("validation"),
            timings=data.get("timings", {}),
            error=data.get("error"),
            plot=data.get("plot"),
            tool_version=data.get("tool_version", TOOL_VERSION),
        )


def barrier_document(poly: Polynomial) -> dict:
    return {
        "dim": poly.table.n,
        "variables": list(poly.table.state_names),
        "text": poly.to_text(),
        "terms": poly.to_structured(),
    }


def barrier_from_document(doc: dict) -> Polynomial:
    table = VariableTable(tuple(doc["variables"]))
    return Polynomial.from_structured(table, doc["terms"])


def result_from_search(search: SearchResult, config: RunConfig) -> RunResult:
    cert = search.certificate
    result = RunResult(
        status=search.status,
        mode=config.mode,
        name=config.name,
        policy=search.policy,
        per_degree=[r.to_dict() for r in search.records],
        timings={"total_wall": search.wall_time},
    )
    if cert is not None:
        result.barrier = barrier_document(cert.barrier)
        result.gamma = cert.gamma
        result.lam = cert.lam
        result.c = cert.c
        result.confidence = cert.confidence
        result.degree = cert.degree
        if cert.validation is not None:
            result.validation = cert.validation.to_dict()
        result.timings["winner_wall"] = cert.wall_time
        if config.dim == 2:
            # level-set grid over the state box so clients can render the
            # certificate's contours without computing anything themselves
            from .simulate import level_set_grid
            from .systems import Box

            box = Box.of(config.L_space, config.U_space)
            grid = level_set_grid(cert.barrier, cert.gamma, cert.lam, box,
                                  resolution=61)
            result.plot = grid.to_dict()
    return result


def execute_config(config: RunConfig, *, parallel: bool | None = None,
                   degrees: list[int] | None = None,
                   max_degree: int | None = None,
                   options: SynthOptions | None = None,
                   cancel_token=None) -> RunResult:
    """Dispatch a validated config to the class-appropriate search."""
    started = time.perf_counter()
    try:
        system, prob = build_system(config)
    except ConfigError as exc:
        return RunResult(status="invalid_input", mode=config.mode,
                         name=config.name, error=str(exc))

    use_parallel = config.parallel if parallel is None else parallel
    plan_degrees = degrees if degrees is not None else config.degrees
    if plan_degrees is not None:
        plan = SearchPlan(tuple(plan_degrees))
    elif max_degree is not None:
        plan = SearchPlan.up_to(max_degree)
    elif use_parallel:
        plan = SearchPlan.up_to(config.b_degree)
    else:
        plan = SearchPlan((config.b_degree,))

    options = options or SynthOptions()
    try:
        if use_parallel:
            search = parallel_search(system, prob, plan, options,
                                     cancel_token=cancel_token)
        else:
            search = serial_search(system, prob, plan, options)
    except InvalidProblemError as exc:
        return RunResult(status="invalid_input", mode=config.mode,
                         name=config.name, error=str(exc))
    except BarrierCertError as exc:
        return RunResult(status="failure", mode=config.mode,
                         name=config.name, error=str(exc))

    result = result_from_search(search, config)
    result.timings["total_wall"] = time.perf_counter() - started
    return result


def run_config(source: str | dict, **kwargs) -> RunResult:
    """Load + validate + execute; schema errors become invalid_input results."""
    try:
        config = load_config(source)
    except ConfigError as exc:
        return RunResult(status="invalid_input", error=str(exc))
    return execute_config(config, **kwargs)
