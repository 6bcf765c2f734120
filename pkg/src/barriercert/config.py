"""Configuration documents: schema validation and system construction.

Field names mirror the tool's function-call surface one-for-one (`b_degree`,
`L_initial`, `NoiseType`, `p_rate`, ...). Dynamics are expression strings
over x1..xn and, for dt-SS, varsigma1..varsigmam, with all model constants
inlined as numeric literals. Unknown keys are rejected.
"""

from __future__ import annotations

import json
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigError, PolynomialSyntaxError
from .moments import NoiseSpec
from .poly import Polynomial, VariableTable, parse_polynomial
from .systems import Box, CtDs, CtSs, DtDs, DtSs, Mode, SafetyProblem, SystemSpec

Number = int | float
Expr = str | int | float

CONFIG_FIELD_ORDER = [
    "name", "description", "mode", "dim", "b_degree", "l_degree",
    "L_space", "U_space", "L_initial", "U_initial", "L_unsafe", "U_unsafe",
    "f", "t",
    "NoiseType", "mean", "sigma", "rate", "a", "b",
    "delta", "rho", "p_rate",
    "optimize", "confidence", "gam", "lam", "c_val",
    "solver", "parallel", "degrees", "eps_gap", "box_encoding", "barrier_sos",
    "barrier_nonneg",
]


class RunConfig(BaseModel):
    """One solve request; see the README for the full schema documentation."""

    model_config = ConfigDict(extra="forbid")

    name: str | None = None
    description: str | None = None
    mode: Literal["dt-SS", "dt-DS", "ct-SS", "ct-DS"]
    dim: int = Field(ge=1)
    b_degree: int = Field(ge=2)
    l_degree: int | None = None
    L_space: list[Number]
    U_space: list[Number]
    L_initial: list[Number]
    U_initial: list[Number]
    L_unsafe: list[list[Number]]
    U_unsafe: list[list[Number]]
    f: list[Expr]
    t: int | None = None
    NoiseType: Literal["normal", "uniform", "exponential"] | None = None
    mean: list[Number] | None = None
    sigma: list[Number] | None = None
    rate: list[Number] | None = None
    a: list[Number] | None = None
    b: list[Number] | None = None
    delta: list[Expr] | list[list[Expr]] | Number | None = None
    rho: list[Expr] | list[list[Expr]] | Number | None = None
    p_rate: list[Number] | Number | None = None
    optimize: bool = False
    confidence: float | None = None
    gam: Number | None = None
    lam: Number | None = None
    c_val: Number | None = None
    solver: Literal["clarabel"] = "clarabel"
    parallel: bool = False
    degrees: list[int] | None = None
    eps_gap: float = 1e-6
    box_encoding: Literal["affine", "quadratic"] = "affine"
    barrier_sos: bool = False
    barrier_nonneg: bool = False

    @property
    def is_stochastic(self) -> bool:
        return self.mode in ("dt-SS", "ct-SS")

    @property
    def is_discrete(self) -> bool:
        return self.mode in ("dt-SS", "dt-DS")


def load_config(source: str | dict) -> RunConfig:
    """Parse and schema-validate a config from a JSON string, a path-free
    dict, or raise ConfigError naming the offending key."""
    if isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ConfigError("<document>", f"not valid JSON: {exc}") from exc
    else:
        data = source
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(part) for part in first["loc"]) or "<document>"
        raise ConfigError(loc, first["msg"]) from exc


def load_config_file(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return load_config(fh.read())


def _canonical_value(value):
    """Integral floats become ints so the byte form is serializer-agnostic
    (JSON itself does not distinguish 1 from 1.0)."""
    if isinstance(value, bool):
        return value
    if isinstance(value, float) and value.is_integer() and abs(value) < 2**53:
        return int(value)
    if isinstance(value, list):
        return [_canonical_value(v) for v in value]
    return value


def canonical_config_dict(config: RunConfig) -> dict:
    """Fixed key order, fields at their schema defaults omitted, integral
    floats normalized: export and import round-trip byte-identically on
    canonical documents (and the rule is reproducible from other languages'
    JSON serializers)."""
    raw = config.model_dump()
    out = {}
    for key in CONFIG_FIELD_ORDER:
        value = raw.get(key)
        default = RunConfig.model_fields[key].default
        if value is None or value == default:
            continue
        out[key] = _canonical_value(value)
    return out


def dump_config(config: RunConfig) -> str:
    return json.dumps(canonical_config_dict(config), indent=2) + "\n"


# --------------------------------------------------------------------------
# construction of systems and problems
# --------------------------------------------------------------------------


def _require(condition: bool, field: str, message: str):
    if not condition:
        raise ConfigError(field, message)


def _forbid(config: RunConfig, fields: list[str], reason: str):
    for field in fields:
        if getattr(config, field) not in (None, False):
            raise ConfigError(field, f"not applicable: {reason}")


def _parse_expr(text: Expr, table: VariableTable, field: str) -> Polynomial:
    if isinstance(text, (int, float)):
        return Polynomial.constant(table, text)
    try:
        return parse_polynomial(text, table)
    except PolynomialSyntaxError as exc:
        raise ConfigError(field, str(exc)) from exc


def _noise_spec(config: RunConfig) -> NoiseSpec:
    kind = config.NoiseType
    _require(kind is not None, "NoiseType", "required for dt-SS")
    params = {"normal": ("mean", "sigma"), "uniform": ("a", "b"),
              "exponential": ("rate",)}[kind]
    for field in ("mean", "sigma", "rate", "a", "b"):
        value = getattr(config, field)
        if field in params:
            _require(value is not None, field, f"required for {kind} noise")
        else:
            _require(value is None, field, f"not a parameter of {kind} noise")
    arrays = [getattr(config, field) for field in params]
    lengths = {len(arr) for arr in arrays}
    _require(len(lengths) == 1, params[0], "noise parameter arrays must share one length")
    try:
        if kind == "normal":
            return NoiseSpec.normal(config.mean, config.sigma)
        if kind == "uniform":
            return NoiseSpec.uniform(config.a, config.b)
        return NoiseSpec.exponential(config.rate)
    except ValueError as exc:
        raise ConfigError(params[0], str(exc)) from exc


def _matrix(value, table: VariableTable, field: str) -> tuple[tuple[Polynomial, ...], ...]:
    """Normalize a diffusion/reset entry: scalar 0 or None -> no columns;
    flat list -> one column (length n); list of lists -> n rows."""
    n = table.n
    zero_rows = tuple(() for _ in range(n))
    if value is None:
        return zero_rows
    if isinstance(value, (int, float)):
        _require(value == 0, field, "a scalar is only allowed as 0 (term absent)")
        return zero_rows
    _require(isinstance(value, list) and value, field, "expected a list")
    if all(isinstance(entry, list) for entry in value):
        _require(len(value) == n, field, f"expected {n} rows")
        widths = {len(row) for row in value}
        _require(len(widths) == 1, field, "rows must have equal width")
        rows = tuple(
            tuple(_parse_expr(e, table, f"{field}[{i}][{j}]") for j, e in enumerate(row))
            for i, row in enumerate(value)
        )
    else:
        _require(len(value) == n, field, f"expected {n} entries (one per dimension)")
        rows = tuple(
            (_parse_expr(e, table, f"{field}[{i}]"),) for i, e in enumerate(value)
        )
    if all(entry.is_zero() for row in rows for entry in row):
        return zero_rows
    return rows


def build_system(config: RunConfig) -> tuple[SystemSpec, SafetyProblem]:
    """Turn a validated config into a system description and safety problem.

    Raises ConfigError with the offending field for cross-field violations;
    problem invariants (containment, disjointness) are checked later by
    SafetyProblem.validate."""
    n = config.dim
    for field in ("L_space", "U_space", "L_initial", "U_initial"):
        _require(len(getattr(config, field)) == n, field, f"expected {n} entries")
    _require(len(config.f) == n, "f", f"expected {n} expressions")
    _require(len(config.L_unsafe) == len(config.U_unsafe) and config.L_unsafe,
             "L_unsafe", "one lower/upper array pair per unsafe region")
    for j, (lo, hi) in enumerate(zip(config.L_unsafe, config.U_unsafe)):
        _require(len(lo) == n, f"L_unsafe[{j}]", f"expected {n} entries")
        _require(len(hi) == n, f"U_unsafe[{j}]", f"expected {n} entries")
    if config.l_degree is not None:
        _require(config.l_degree >= 2 and config.l_degree % 2 == 0,
                 "l_degree", "must be an even integer >= 2")
    _require(config.b_degree % 2 == 0, "b_degree", "must be an even integer >= 2")
    if config.degrees is not None:
        _require(all(d >= 2 and d % 2 == 0 for d in config.degrees),
                 "degrees", "must be even integers >= 2")
        _require(config.degrees == sorted(set(config.degrees)),
                 "degrees", "must be strictly ascending")
    _require(not (config.optimize and config.confidence is not None),
             "optimize", "choose either optimize or a confidence target, not both")

    if config.is_stochastic:
        _require(config.t is not None, "t", "t required for stochastic classes")
        _require(config.t >= 1, "t", "must be a positive integer")
        if config.optimize:
            _require(config.lam is not None, "lam",
                     "optimize mode requires a pinned lam")
        if config.confidence is not None:
            _require(0 < config.confidence < 1, "confidence",
                     "must lie strictly between 0 and 1")
    else:
        _forbid(config, ["t", "NoiseType", "mean", "sigma", "rate", "a", "b",
                         "delta", "rho", "p_rate", "confidence", "c_val"],
                f"{config.mode} is deterministic")
        _require(not config.optimize, "optimize",
                 f"not applicable: {config.mode} is deterministic")

    if config.mode == "dt-SS":
        noise = _noise_spec(config)
        _forbid(config, ["delta", "rho", "p_rate"], "dt-SS uses additive noise")
        table = VariableTable.create(n, noise.dim)
        f = tuple(_parse_expr(e, table, f"f[{i}]") for i, e in enumerate(config.f))
        system: SystemSpec = DtSs(f, noise, table)
    elif config.mode == "dt-DS":
        table = VariableTable.create(n)
        f = tuple(_parse_expr(e, table, f"f[{i}]") for i, e in enumerate(config.f))
        system = DtDs(f, table)
    elif config.mode == "ct-SS":
        _forbid(config, ["NoiseType", "mean", "sigma", "rate", "a", "b"],
                "ct-SS uses Brownian/Poisson terms")
        table = VariableTable.create(n)
        drift = tuple(_parse_expr(e, table, f"f[{i}]") for i, e in enumerate(config.f))
        diffusion = _matrix(config.delta, table, "delta")
        reset = _matrix(config.rho, table, "rho")
        r = len(reset[0])
        if config.p_rate is None:
            rates: list[Number] = []
        elif isinstance(config.p_rate, (int, float)):
            rates = [config.p_rate] * r  # broadcast a scalar rate per column
            _require(r > 0 or config.p_rate == 0, "p_rate",
                     "nonzero rate given but rho is zero/absent")
        else:
            rates = list(config.p_rate)
        if r == 0:
            _require(all(v == 0 for v in rates), "p_rate",
                     "rates given but rho is zero/absent")
            rates = []
        else:
            _require(len(rates) == r, "p_rate",
                     f"expected {r} rates, one per reset column")
            _require(all(v >= 0 for v in rates), "p_rate", "rates must be >= 0")
        system = CtSs.create(drift, table, diffusion=diffusion, reset=reset, rates=rates)
    else:  # ct-DS
        table = VariableTable.create(n)
        f = tuple(_parse_expr(e, table, f"f[{i}]") for i, e in enumerate(config.f))
        system = CtDs(f, table)

    if config.confidence is not None:
        mode = Mode.TARGET_CONFIDENCE
    elif config.optimize:
        mode = Mode.OPTIMIZE_CONFIDENCE
    else:
        mode = Mode.FEASIBILITY

    from .poly import decimal_fraction

    prob = SafetyProblem(
        space=Box.of(config.L_space, config.U_space),
        initial=Box.of(config.L_initial, config.U_initial),
        unsafe=tuple(Box.of(lo, hi) for lo, hi in zip(config.L_unsafe, config.U_unsafe)),
        horizon=config.t if config.is_stochastic else None,
        mode=mode,
        b_degree=config.b_degree,
        l_degree=config.l_degree,
        confidence_target=config.confidence,
        gam=decimal_fraction(config.gam) if config.gam is not None else None,
        lam=decimal_fraction(config.lam) if config.lam is not None else None,
        c_val=decimal_fraction(config.c_val) if config.c_val is not None else None,
        eps_gap=decimal_fraction(config.eps_gap),
        box_encoding=config.box_encoding,
        barrier_sos=config.barrier_sos,
        barrier_nonneg=config.barrier_nonneg,
    )
    return system, prob
