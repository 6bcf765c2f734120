"""SOS programs and their compilation to block-diagonal SDPs.

An :class:`SosProgram` holds unknown-coefficient polynomials (free or
Gram-parametrized), free scalar decision variables, affine scalar constraints,
and SOS constraints whose expressions are affine in the unknowns.
:func:`compile_to_sdp` performs the standard Gram-matrix embedding: one PSD
block per SOS-constrained unknown and per SOS constraint, one coefficient-
matching equality row per monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import EmptyBoxError, OddDegreeError
from .poly import (
    Monomial,
    NumberLike,
    Polynomial,
    VariableTable,
    monomial_basis,
    to_fraction,
)


@dataclass(frozen=True)
class SemiAlgebraicSet:
    """{x : g_k(x) >= 0 for all k}; every g_k over state variables only."""

    inequalities: tuple[Polynomial, ...]

    def __post_init__(self):
        if not self.inequalities:
            raise ValueError("semi-algebraic set needs at least one inequality")
        for g in self.inequalities:
            if g.table.m and g.degree_in(g.table.noise_indices()) > 0:
                raise ValueError("set inequality uses noise variables")

    def with_extra(self, g: Polynomial) -> "SemiAlgebraicSet":
        return SemiAlgebraicSet(self.inequalities + (g,))


def box_to_semialgebraic(
    lower: Sequence[NumberLike],
    upper: Sequence[NumberLike],
    table: VariableTable,
    *,
    encoding: str = "affine",
) -> SemiAlgebraicSet:
    """Box as polynomial inequalities.

    affine (default): [x_i - L_i, U_i - x_i] per dimension (2n inequalities).
    quadratic: [(x_i - L_i)(U_i - x_i)] per dimension (n inequalities).
    """
    if len(lower) != len(upper):
        raise ValueError("lower/upper length mismatch")
    if len(lower) != table.n:
        raise ValueError(f"box dimension {len(lower)} != state dimension {table.n}")
    ineqs: list[Polynomial] = []
    for i, (lo_raw, hi_raw) in enumerate(zip(lower, upper)):
        lo, hi = to_fraction(lo_raw), to_fraction(hi_raw)
        if lo > hi:
            raise EmptyBoxError(f"dimension {i}: lower {float(lo)} > upper {float(hi)}")
        x = Polynomial.variable(table, i)
        if encoding == "affine":
            ineqs.append(x - lo)
            ineqs.append(Polynomial.constant(table, hi) - x)
        elif encoding == "quadratic":
            ineqs.append((x - lo) * (Polynomial.constant(table, hi) - x))
        else:
            raise ValueError(f"unknown box encoding {encoding!r}")
    return SemiAlgebraicSet(tuple(ineqs))


# --------------------------------------------------------------------------
# affine forms over decision variables
# --------------------------------------------------------------------------


class LinExpr:
    """Affine form sum(coeff_i * var_i) + const over decision-variable ids."""

    __slots__ = ("terms", "const")

    def __init__(self, terms: Mapping[int, Fraction] | None = None, const: NumberLike = 0):
        self.terms: dict[int, Fraction] = {
            k: v for k, v in (terms or {}).items() if v != 0
        }
        self.const: Fraction = to_fraction(const)

    @staticmethod
    def of_var(var_id: int, coeff: NumberLike = 1) -> "LinExpr":
        return LinExpr({var_id: to_fraction(coeff)})

    @staticmethod
    def of_const(value: NumberLike) -> "LinExpr":
        return LinExpr(None, value)

    def copy(self) -> "LinExpr":
        return LinExpr(dict(self.terms), self.const)

    def add_term(self, var_id: int, coeff: Fraction) -> None:
        acc = self.terms.get(var_id, Fraction(0)) + coeff
        if acc == 0:
            self.terms.pop(var_id, None)
        else:
            self.terms[var_id] = acc

    def __add__(self, other) -> "LinExpr":
        out = self.copy()
        if isinstance(other, LinExpr):
            for vid, c in other.terms.items():
                out.add_term(vid, c)
            out.const += other.const
        else:
            out.const += to_fraction(other)
        return out

    def __sub__(self, other) -> "LinExpr":
        if isinstance(other, LinExpr):
            return self + other.scale(-1)
        return self + (-to_fraction(other))

    def __neg__(self) -> "LinExpr":
        return self.scale(-1)

    def scale(self, k: NumberLike) -> "LinExpr":
        frac = to_fraction(k)
        if frac == 0:
            return LinExpr()
        return LinExpr({vid: c * frac for vid, c in self.terms.items()}, self.const * frac)

    def is_zero(self) -> bool:
        return not self.terms and self.const == 0

    def value(self, assignment: Mapping[int, float]) -> float:
        return float(self.const) + sum(
            float(c) * assignment[vid] for vid, c in self.terms.items()
        )

    def __repr__(self):
        parts = [f"{float(c)}*v{vid}" for vid, c in sorted(self.terms.items())]
        if self.const or not parts:
            parts.append(str(float(self.const)))
        return " + ".join(parts)


class PolyLin:
    """Polynomial whose coefficients are affine forms in decision variables."""

    __slots__ = ("table", "coeffs")

    def __init__(self, table: VariableTable, coeffs: dict[Monomial, LinExpr] | None = None):
        self.table = table
        self.coeffs: dict[Monomial, LinExpr] = coeffs or {}

    @staticmethod
    def from_poly(p: Polynomial) -> "PolyLin":
        return PolyLin(
            p.table, {m: LinExpr.of_const(c) for m, c in p.terms.items()}
        )

    @staticmethod
    def zero(table: VariableTable) -> "PolyLin":
        return PolyLin(table)

    def add_inplace(self, mono: Monomial, expr: LinExpr) -> None:
        acc = self.coeffs.get(mono)
        self.coeffs[mono] = expr if acc is None else acc + expr

    def __add__(self, other: "PolyLin") -> "PolyLin":
        out = PolyLin(self.table, {m: e.copy() for m, e in self.coeffs.items()})
        for mono, expr in other.coeffs.items():
            out.add_inplace(mono, expr)
        return out

    def __sub__(self, other: "PolyLin") -> "PolyLin":
        return self + other.scale(-1)

    def scale(self, k: NumberLike) -> "PolyLin":
        return PolyLin(self.table, {m: e.scale(k) for m, e in self.coeffs.items()})

    def add_scalar(self, expr: LinExpr) -> "PolyLin":
        out = PolyLin(self.table, {m: e.copy() for m, e in self.coeffs.items()})
        out.add_inplace(Monomial.unit(self.table.size), expr)
        return out

    def mul_poly(self, p: Polynomial) -> "PolyLin":
        """Multiply by a numeric polynomial (keeps affinity in the unknowns)."""
        out = PolyLin(self.table)
        for mono, expr in self.coeffs.items():
            for pm, pc in p.terms.items():
                out.add_inplace(mono.mul(pm), expr.scale(pc))
        return out

    @property
    def degree(self) -> int:
        """Structural degree: over monomials present with a nonzero form."""
        degs = [m.degree for m, e in self.coeffs.items() if not e.is_zero()]
        return max(degs) if degs else -1

    def instantiate(self, assignment: Mapping[int, float]) -> dict[Monomial, float]:
        out = {}
        for mono, expr in self.coeffs.items():
            val = expr.value(assignment)
            if val != 0.0:
                out[mono] = val
        return out


# --------------------------------------------------------------------------
# program
# --------------------------------------------------------------------------


@dataclass
class ScalarVar:
    name: str
    var_id: int


@dataclass
class GramBlock:
    """Symmetric PSD matrix over a monomial half-basis; entry ids cover the
    upper triangle column-major (matching scaled-svec order)."""

    name: str
    basis: tuple[Monomial, ...]
    entry_ids: tuple[int, ...]  # (i<=j), ordered by (j, i)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def entry_id(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self.entry_ids[j * (j + 1) // 2 + i]

    def poly_lin(self, table: VariableTable) -> PolyLin:
        """z(x)^T Q z(x) as a PolyLin over the Gram entries."""
        out = PolyLin(table)
        d = self.dim
        for j in range(d):
            for i in range(j + 1):
                mono = self.basis[i].mul(self.basis[j])
                coeff = Fraction(1) if i == j else Fraction(2)
                out.add_inplace(mono, LinExpr.of_var(self.entry_id(i, j), coeff))
        return out


@dataclass
class UnknownPoly:
    """Unknown-coefficient polynomial: free coefficients, or coefficients
    induced by a PSD Gram matrix when SOS-constrained."""

    name: str
    degree: int
    sos_constrained: bool
    basis: tuple[Monomial, ...]
    coeff_ids: tuple[int, ...] = ()      # free form
    gram: GramBlock | None = None        # SOS form

    def poly_lin(self, table: VariableTable) -> PolyLin:
        if self.sos_constrained:
            return self.gram.poly_lin(table)
        out = PolyLin(table)
        for mono, vid in zip(self.basis, self.coeff_ids):
            out.add_inplace(mono, LinExpr.of_var(vid))
        return out

    def value(self, assignment: Mapping[int, float], table: VariableTable) -> Polynomial:
        inst = self.poly_lin(table).instantiate(assignment)
        return Polynomial(table, {m: Fraction(v) for m, v in inst.items()})


@dataclass
class SosConstraint:
    name: str
    expr: PolyLin
    gram_dim_hint: int = 0  # filled at compile time


@dataclass
class LinearConstraint:
    expr: LinExpr
    sense: str  # "==" or ">="
    rhs: Fraction


class SosProgram:
    """Single-owner mutable builder; compile to an immutable SdpProblem."""

    def __init__(self, table: VariableTable):
        self.table = table
        self._next_id = 0
        self.scalars: list[ScalarVar] = []
        self.unknowns: list[UnknownPoly] = []
        self.sos_constraints: list[SosConstraint] = []
        self.linear_constraints: list[LinearConstraint] = []
        self.objective: LinExpr | None = None

    def _alloc(self, count: int) -> range:
        start = self._next_id
        self._next_id += count
        return range(start, start + count)

    def new_scalar(self, name: str, *, nonneg: bool = False,
                   pinned: NumberLike | None = None) -> ScalarVar:
        var = ScalarVar(name, self._alloc(1).start)
        self.scalars.append(var)
        if pinned is not None:
            self.add_linear_constraint(LinExpr.of_var(var.var_id), "==", pinned)
        elif nonneg:
            self.add_linear_constraint(LinExpr.of_var(var.var_id), ">=", 0)
        return var

    def _new_gram(self, name: str, basis: Sequence[Monomial]) -> GramBlock:
        d = len(basis)
        ids = tuple(self._alloc(d * (d + 1) // 2))
        return GramBlock(name, tuple(basis), ids)

    def new_unknown_poly(self, name: str, n: int, degree: int, *,
                         sos_constrained: bool = True) -> UnknownPoly:
        """Free form: C(n+degree, degree) coefficient variables. SOS form:
        one PSD Gram block over the half-degree basis."""
        if degree < 0:
            raise ValueError("degree must be >= 0")
        if sos_constrained:
            if degree % 2:
                raise OddDegreeError(
                    f"SOS-constrained polynomial {name!r} needs even degree, got {degree}"
                )
            half = monomial_basis(n, degree // 2, size=self.table.size)
            gram = self._new_gram(f"{name}.gram", half)
            unknown = UnknownPoly(name, degree, True,
                                  tuple(monomial_basis(n, degree, size=self.table.size)),
                                  gram=gram)
        else:
            basis = monomial_basis(n, degree, size=self.table.size)
            ids = tuple(self._alloc(len(basis)))
            unknown = UnknownPoly(name, degree, False, tuple(basis), coeff_ids=ids)
        self.unknowns.append(unknown)
        return unknown

    def add_sos_constraint(self, expr: PolyLin, name: str) -> int:
        """Require `expr` (affine in the unknowns) to be an SOS polynomial.
        Odd top degree is Gram-padded up to the next even degree."""
        self.sos_constraints.append(SosConstraint(name, expr))
        return len(self.sos_constraints) - 1

    def add_linear_constraint(self, expr: LinExpr, sense: str, rhs: NumberLike) -> None:
        if sense not in ("==", ">="):
            raise ValueError(f"unknown sense {sense!r}")
        self.linear_constraints.append(LinearConstraint(expr, sense, to_fraction(rhs)))

    def minimize(self, expr: LinExpr) -> None:
        self.objective = expr


# --------------------------------------------------------------------------
# compiled SDP
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SdpBlock:
    name: str
    dim: int
    entry_ids: tuple[int, ...]  # upper triangle, column-major
    kind: str                   # "gram-unknown" | "gram-constraint" | "slack"


@dataclass(frozen=True)
class SdpRow:
    entries: tuple[tuple[int, float], ...]
    rhs: float
    label: str = ""


@dataclass(frozen=True)
class SdpProblem:
    """Block-diagonal SDP: PSD blocks + free scalars, equality rows, linear
    objective over the decision variables (Gram entries and scalars)."""

    n_vars: int
    blocks: tuple[SdpBlock, ...]
    rows: tuple[SdpRow, ...]
    objective: tuple[tuple[int, float], ...]
    scalar_vars: tuple[tuple[str, int], ...]
    constraint_blocks: tuple[tuple[str, int], ...]  # sos-constraint name -> block index

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def block_index(self, name: str) -> int:
        for k, b in enumerate(self.blocks):
            if b.name == name:
                return k
        raise KeyError(name)


def compile_to_sdp(prog: SosProgram) -> SdpProblem:
    """Gram-matrix embedding of the program.

    One PSD block per SOS-constrained unknown and per SOS constraint; per
    constraint, one equality row for every monomial representable by its Gram
    basis (coefficients of z^T Q z matched against the affine expression);
    scalar '>=' constraints become 1x1 slack blocks plus an equality row.
    """
    blocks: list[SdpBlock] = []
    rows: list[SdpRow] = []
    constraint_blocks: list[tuple[str, int]] = []
    next_id = prog._next_id

    def alloc(count: int) -> range:
        nonlocal next_id
        start = next_id
        next_id += count
        return range(start, start + count)

    for unknown in prog.unknowns:
        if unknown.sos_constrained:
            gram = unknown.gram
            blocks.append(SdpBlock(gram.name, gram.dim, gram.entry_ids, "gram-unknown"))

    n_state = prog.table.n

    for constraint in prog.sos_constraints:
        expr = constraint.expr
        if expr.table.m:
            bad = [m for m, e in expr.coeffs.items()
                   if not e.is_zero() and sum(m.powers[n_state:]) > 0]
            if bad:
                raise ValueError(
                    f"SOS constraint {constraint.name!r} still contains noise variables"
                )
        degree = max(expr.degree, 0)
        half = (degree + 1) // 2
        basis = monomial_basis(n_state, half, size=prog.table.size)
        d = len(basis)
        ids = tuple(alloc(d * (d + 1) // 2))
        gram = GramBlock(f"{constraint.name}.gram", tuple(basis), ids)
        constraint.gram_dim_hint = d
        block_index = len(blocks)
        blocks.append(SdpBlock(gram.name, d, ids, "gram-constraint"))
        constraint_blocks.append((constraint.name, block_index))

        gram_side = gram.poly_lin(prog.table)
        # one equality row per monomial of degree <= 2*half
        for mono in monomial_basis(n_state, 2 * half, size=prog.table.size):
            equation = gram_side.coeffs.get(mono, LinExpr()) - expr.coeffs.get(mono, LinExpr())
            if equation.is_zero():
                continue
            entries = tuple((vid, float(c)) for vid, c in sorted(equation.terms.items()))
            rows.append(SdpRow(entries, float(-equation.const),
                               label=f"{constraint.name}:{mono}"))

    for k, lin in enumerate(prog.linear_constraints):
        expr, rhs = lin.expr, lin.rhs
        if lin.sense == ">=":
            slack_id = alloc(1).start
            blocks.append(SdpBlock(f"slack{k}", 1, (slack_id,), "slack"))
            equation = expr - LinExpr.of_var(slack_id)
            rows.append(SdpRow(
                tuple((vid, float(c)) for vid, c in sorted(equation.terms.items())),
                float(rhs - equation.const), label=f"lin{k}:>="))
        else:
            rows.append(SdpRow(
                tuple((vid, float(c)) for vid, c in sorted(expr.terms.items())),
                float(rhs - expr.const), label=f"lin{k}:=="))

    objective: tuple[tuple[int, float], ...] = ()
    if prog.objective is not None:
        objective = tuple(
            (vid, float(c)) for vid, c in sorted(prog.objective.terms.items())
        )

    return SdpProblem(
        n_vars=next_id,
        blocks=tuple(blocks),
        rows=tuple(rows),
        objective=objective,
        scalar_vars=tuple((s.name, s.var_id) for s in prog.scalars),
        constraint_blocks=tuple(constraint_blocks),
    )


def gram_polynomial(basis: Sequence[Monomial], matrix, table: VariableTable) -> dict[Monomial, float]:
    """Numeric z(x)^T Q z(x) as a monomial->coefficient map."""
    out: dict[Monomial, float] = {}
    d = len(basis)
    for i in range(d):
        for j in range(d):
            mono = basis[i].mul(basis[j])
            out[mono] = out.get(mono, 0.0) + float(matrix[i][j])
    return {m: c for m, c in out.items() if c != 0.0}


def dump_problem_text(problem: SdpProblem) -> str:
    """Sparse text dump (block sizes, row triplets, RHS, objective) for
    cross-checking against external SDP tools."""
    lines = [f"SDP nvars={problem.n_vars} nblocks={len(problem.blocks)} nrows={problem.n_rows}"]
    for k, block in enumerate(problem.blocks):
        ids = " ".join(str(i) for i in block.entry_ids)
        lines.append(f"BLOCK {k} {block.name} dim={block.dim} kind={block.kind} ids={ids}")
    for name, vid in problem.scalar_vars:
        lines.append(f"SCALAR {name} id={vid}")
    for r, row in enumerate(problem.rows):
        triplets = " ".join(f"{vid}:{coeff:.17g}" for vid, coeff in row.entries)
        lines.append(f"ROW {r} rhs={row.rhs:.17g} {triplets}")
    if problem.objective:
        obj = " ".join(f"{vid}:{coeff:.17g}" for vid, coeff in problem.objective)
        lines.append(f"MINIMIZE {obj}")
    return "\n".join(lines) + "\n"
