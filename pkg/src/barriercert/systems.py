"""Domain types: system descriptions, safety problems, certificates."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidProblemError
from .moments import NoiseSpec
from .poly import NumberLike, Polynomial, VariableTable, decimal_fraction


@dataclass(frozen=True)
class Box:
    """Axis-aligned box with exact rational bounds."""

    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("lower/upper length mismatch")
        for i, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if lo > hi:
                raise ValueError(f"dimension {i}: lower {float(lo)} > upper {float(hi)}")

    @staticmethod
    def of(lower: Sequence[NumberLike], upper: Sequence[NumberLike]) -> "Box":
        return Box(
            tuple(decimal_fraction(v) for v in lower),
            tuple(decimal_fraction(v) for v in upper),
        )

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains_box(self, other: "Box") -> bool:
        return all(
            lo <= olo and ohi <= hi
            for lo, hi, olo, ohi in zip(self.lower, self.upper, other.lower, other.upper)
        )

    def intersects(self, other: "Box") -> bool:
        return all(
            lo <= ohi and olo <= hi
            for lo, hi, olo, ohi in zip(self.lower, self.upper, other.lower, other.upper)
        )

    def center(self) -> tuple[Fraction, ...]:
        return tuple((lo + hi) / 2 for lo, hi in zip(self.lower, self.upper))

    def halfwidth(self) -> tuple[Fraction, ...]:
        return tuple((hi - lo) / 2 for lo, hi in zip(self.lower, self.upper))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        lo = np.array([float(v) for v in self.lower])
        hi = np.array([float(v) for v in self.upper])
        return rng.uniform(lo, hi, size=(count, self.dim))

    def float_bounds(self) -> tuple[list[float], list[float]]:
        return [float(v) for v in self.lower], [float(v) for v in self.upper]


def _check_vector(f: Sequence[Polynomial], table: VariableTable, what: str):
    if len(f) != table.n:
        raise InvalidProblemError(f"{what} has {len(f)} entries for {table.n} states")
    for i, p in enumerate(f):
        if p.table != table:
            raise InvalidProblemError(f"{what}[{i}] is over a different variable table")


@dataclass(frozen=True)
class DtSs:
    """Discrete-time stochastic system x(k+1) = f(x(k), noise(k))."""

    f: tuple[Polynomial, ...]
    noise: NoiseSpec
    table: VariableTable

    kind = "dt-SS"
    is_discrete = True
    is_stochastic = True

    def __post_init__(self):
        _check_vector(self.f, self.table, "f")
        if self.noise.dim != self.table.m:
            raise InvalidProblemError(
                f"noise spec covers {self.noise.dim} dims, table declares {self.table.m}"
            )

    @property
    def dim(self) -> int:
        return self.table.n


@dataclass(frozen=True)
class DtDs:
    """Discrete-time deterministic system x(k+1) = f(x(k))."""

    f: tuple[Polynomial, ...]
    table: VariableTable

    kind = "dt-DS"
    is_discrete = True
    is_stochastic = False

    def __post_init__(self):
        if self.table.m:
            raise InvalidProblemError("deterministic system must not declare noise variables")
        _check_vector(self.f, self.table, "f")

    @property
    def dim(self) -> int:
        return self.table.n


@dataclass(frozen=True)
class CtSs:
    """Continuous-time jump-diffusion dx = f dt + diffusion dW + reset dP."""

    drift: tuple[Polynomial, ...]
    diffusion: tuple[tuple[Polynomial, ...], ...]  # n x b
    reset: tuple[tuple[Polynomial, ...], ...]      # n x r
    rates: tuple[Fraction, ...]                    # r Poisson rates

    table: VariableTable

    kind = "ct-SS"
    is_discrete = False
    is_stochastic = True

    def __post_init__(self):
        if self.table.m:
            raise InvalidProblemError("ct-SS uses Brownian/Poisson terms, not noise variables")
        _check_vector(self.drift, self.table, "drift")
        n = self.table.n
        widths = {len(row) for row in self.diffusion}
        if len(self.diffusion) != n or len(widths) > 1:
            raise InvalidProblemError("diffusion must be an n-row matrix of equal-width rows")
        rwidths = {len(row) for row in self.reset}
        if len(self.reset) != n or len(rwidths) > 1:
            raise InvalidProblemError("reset must be an n-row matrix of equal-width rows")
        if len(self.rates) != self.r:
            raise InvalidProblemError(
                f"{len(self.rates)} Poisson rates for {self.r} reset columns"
            )
        if any(w < 0 for w in self.rates):
            raise InvalidProblemError("Poisson rates must be >= 0")
        for row in list(self.diffusion) + list(self.reset):
            for p in row:
                if p.table != self.table:
                    raise InvalidProblemError("matrix entry over a different variable table")

    @staticmethod
    def create(drift: Sequence[Polynomial], table: VariableTable,
               diffusion: Sequence[Sequence[Polynomial]] | None = None,
               reset: Sequence[Sequence[Polynomial]] | None = None,
               rates: Sequence[NumberLike] | None = None) -> "CtSs":
        """Build with optional Brownian/Poisson parts; None means absent
        (zero-width matrix)."""
        n = table.n
        diff = tuple(tuple(row) for row in diffusion) if diffusion else tuple(() for _ in range(n))
        res = tuple(tuple(row) for row in reset) if reset else tuple(() for _ in range(n))
        rts = tuple(decimal_fraction(r) for r in (rates or ()))
        return CtSs(tuple(drift), diff, res, rts, table)

    @property
    def dim(self) -> int:
        return self.table.n

    @property
    def b(self) -> int:
        return len(self.diffusion[0]) if self.diffusion else 0

    @property
    def r(self) -> int:
        return len(self.reset[0]) if self.reset else 0


@dataclass(frozen=True)
class CtDs:
    """Continuous-time deterministic system dx/dt = f(x)."""

    f: tuple[Polynomial, ...]
    table: VariableTable

    kind = "ct-DS"
    is_discrete = False
    is_stochastic = False

    def __post_init__(self):
        if self.table.m:
            raise InvalidProblemError("deterministic system must not declare noise variables")
        _check_vector(self.f, self.table, "f")

    @property
    def dim(self) -> int:
        return self.table.n


SystemSpec = DtSs | DtDs | CtSs | CtDs


class Mode(enum.Enum):
    FEASIBILITY = "feasibility"
    OPTIMIZE_CONFIDENCE = "optimize_confidence"
    TARGET_CONFIDENCE = "target_confidence"


@dataclass(frozen=True)
class SafetyProblem:
    """Safety specification plus synthesis knobs.

    Invariants (checked by `validate`): initial and unsafe boxes inside the
    state box, initial disjoint from every unsafe region, finite horizon for
    stochastic classes, even degrees.
    """

    space: Box
    initial: Box
    unsafe: tuple[Box, ...]
    horizon: int | None = None
    mode: Mode = Mode.FEASIBILITY
    b_degree: int = 2
    l_degree: int | None = None
    confidence_target: float | None = None
    gam: Fraction | None = None
    lam: Fraction | None = None
    c_val: Fraction | None = None
    eps_gap: Fraction = Fraction(1, 10**6)
    box_encoding: str = "affine"
    # Constrain B itself to be SOS (the literal reading of the certificate
    # existence lemma). Off by default: the free-coefficient barrier
    # reproduces the reference confidence levels; the SOS-constrained
    # variant is strictly more conservative.
    barrier_sos: bool = False
    # Certify B >= 0 on the state set (the stochastic definitions' codomain)
    # without requiring global SOS-ness; tightens the probabilistic reading
    # of the confidence bound at the cost of more conservative levels.
    barrier_nonneg: bool = False

    @property
    def multiplier_degree(self) -> int:
        return self.b_degree if self.l_degree is None else self.l_degree

    def validate(self, system: SystemSpec) -> None:
        n = system.dim
        problems: list[str] = []
        if self.b_degree < 2 or self.b_degree % 2:
            problems.append(f"b_degree must be an even integer >= 2, got {self.b_degree}")
        if self.l_degree is not None and (self.l_degree < 2 or self.l_degree % 2):
            problems.append(f"l_degree must be an even integer >= 2, got {self.l_degree}")
        for name, box in (("X", self.space), ("X_initial", self.initial)):
            if box.dim != n:
                problems.append(f"{name} has dimension {box.dim}, system has {n}")
        if not self.unsafe:
            problems.append("at least one unsafe region is required")
        for j, box in enumerate(self.unsafe):
            if box.dim != n:
                problems.append(f"X_unsafe[{j}] has dimension {box.dim}, system has {n}")
        if problems:
            raise InvalidProblemError("; ".join(problems))

        if not self.space.contains_box(self.initial):
            problems.append("X_initial is not contained in the state set X")
        for j, box in enumerate(self.unsafe):
            if not self.space.contains_box(box):
                problems.append(f"X_unsafe[{j}] is not contained in the state set X")
            if self.initial.intersects(box):
                problems.append(f"X_initial overlaps X_unsafe[{j}]")

        if system.is_stochastic:
            if self.horizon is None:
                problems.append("t required for stochastic classes")
            elif self.horizon < 1:
                problems.append(f"t must be a positive integer, got {self.horizon}")
            if self.mode is Mode.OPTIMIZE_CONFIDENCE and self.lam is None:
                problems.append("optimize mode requires a pinned lam")
            if self.mode is Mode.TARGET_CONFIDENCE:
                if self.confidence_target is None:
                    problems.append("target mode requires a confidence value")
                elif not 0 < self.confidence_target < 1:
                    problems.append("confidence must lie strictly between 0 and 1")
        else:
            if self.mode is not Mode.FEASIBILITY:
                problems.append(f"{self.mode.value} mode applies to stochastic classes only")
            if self.c_val is not None and self.c_val != 0:
                problems.append("c_val must be 0 for deterministic classes")

        for name, value in (("gam", self.gam), ("lam", self.lam), ("c_val", self.c_val)):
            if value is not None and value < 0:
                problems.append(f"{name} must be >= 0")
        if self.lam is not None and self.gam is not None and self.lam - self.gam < self.eps_gap:
            problems.append("pinned lam must exceed pinned gam by at least eps_gap")
        if self.eps_gap <= 0:
            problems.append("eps_gap must be > 0")
        if self.box_encoding not in ("affine", "quadratic"):
            problems.append(f"unknown box_encoding {self.box_encoding!r}")

        if problems:
            raise InvalidProblemError("; ".join(problems))


@dataclass
class ClauseCheck:
    name: str
    ok: bool
    margin: float | None = None
    detail: str = ""

    def __post_init__(self):
        # numpy scalars leak in from vectorized checks; keep documents JSON-clean
        self.ok = bool(self.ok)
        if self.margin is not None:
            self.margin = float(self.margin)

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "margin": self.margin, "detail": self.detail}


@dataclass
class ValidationReport:
    ok: bool
    clauses: list[ClauseCheck]
    samples: int
    tol: float
    seed: int

    def clause(self, name: str) -> ClauseCheck:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "samples": self.samples,
            "tol": self.tol,
            "seed": self.seed,
            "clauses": [c.to_dict() for c in self.clauses],
        }


@dataclass
class SynthArtifacts:
    """Solver-side evidence kept with a certificate for validation: the
    program (in its own, possibly normalized, coordinates), the compiled
    problem and the raw solution."""

    program: object
    problem: object
    solution: object
    normalized: bool


@dataclass
class Certificate:
    barrier: Polynomial
    gamma: float
    lam: float
    c: float
    confidence: float | None
    degree: int
    validation: ValidationReport | None = None
    solve_diagnostics: dict = field(default_factory=dict)
    wall_time: float = 0.0
    artifacts: SynthArtifacts | None = None

    def summary(self) -> dict:
        return {
            "gamma": self.gamma,
            "lambda": self.lam,
            "c": self.c,
            "confidence": self.confidence,
            "degree": self.degree,
        }


class SynthStatus(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical_failure"
    CANCELLED = "cancelled"
    INVALID_CERTIFICATE = "invalid_certificate"


@dataclass
class SynthOutcome:
    status: SynthStatus
    certificate: Certificate | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status is SynthStatus.FEASIBLE
