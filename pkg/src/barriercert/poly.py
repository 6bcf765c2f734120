"""Sparse multivariate polynomial algebra with exact rational coefficients.

Every symbolic object in the toolkit (dynamics, barrier templates, multipliers,
generators) is a :class:`Polynomial`. Coefficients stay `fractions.Fraction`
until SDP assembly, so expansion and expectation never accumulate rounding
drift. A restricted recursive-descent parser turns expression strings from
configuration files into canonical polynomials.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonPolynomialError,
    PolynomialSyntaxError,
    UnknownSymbolError,
)

NumberLike = int | float | str | Fraction


def to_fraction(value: NumberLike) -> Fraction:
    """Exact conversion to Fraction.

    Decimal strings become exact decimals ('0.1' -> 1/10); floats convert
    exactly as stored (binary).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coefficient: {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def decimal_fraction(value: NumberLike) -> Fraction:
    """Fraction for user-supplied numbers: floats are read as the shortest
    decimal that round-trips (0.01 -> 1/100), matching the intent of JSON
    config values rather than the binary storage."""
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value: {value!r}")
        return Fraction(repr(value))
    return to_fraction(value)


@dataclass(frozen=True)
class VariableTable:
    """Ordered state variables followed by noise variables.

    Indices are 0-based internally; display names follow the x1..xn /
    varsigma1..varsigmam convention used throughout the configuration surface.
    """

    state_names: tuple[str, ...]
    noise_names: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.state_names) < 1:
            raise ValueError("at least one state variable required")
        all_names = self.state_names + self.noise_names
        if len(set(all_names)) != len(all_names):
            raise ValueError(f"variable names not unique: {all_names}")

    @staticmethod
    def create(n: int, m: int = 0) -> "VariableTable":
        """Standard table with states x1..xn and noise varsigma1..varsigmam."""
        if n < 1:
            raise ValueError("state dimension must be >= 1")
        if m < 0:
            raise ValueError("noise dimension must be >= 0")
        return VariableTable(
            tuple(f"x{i + 1}" for i in range(n)),
            tuple(f"varsigma{j + 1}" for j in range(m)),
        )

    @property
    def n(self) -> int:
        return len(self.state_names)

    @property
    def m(self) -> int:
        return len(self.noise_names)

    @property
    def size(self) -> int:
        return self.n + self.m

    def name(self, index: int) -> str:
        names = self.state_names + self.noise_names
        return names[index]

    def index(self, name: str) -> int:
        try:
            return (self.state_names + self.noise_names).index(name)
        except ValueError:
            raise KeyError(name) from None

    def is_noise(self, index: int) -> bool:
        return index >= self.n

    def noise_indices(self) -> range:
        return range(self.n, self.size)


@dataclass(frozen=True)
class Monomial:
    """Exponent vector; `powers[i]` is the exponent of variable i."""

    powers: tuple[int, ...]

    def __post_init__(self):
        if any(p < 0 for p in self.powers):
            raise ValueError(f"negative exponent in {self.powers}")

    @staticmethod
    def unit(size: int) -> "Monomial":
        return Monomial((0,) * size)

    @staticmethod
    def variable(index: int, size: int) -> "Monomial":
        return Monomial(tuple(1 if i == index else 0 for i in range(size)))

    @property
    def degree(self) -> int:
        return sum(self.powers)

    def exponents(self) -> dict[int, int]:
        """Sparse view: variable index -> exponent, zero exponents omitted."""
        return {i: p for i, p in enumerate(self.powers) if p != 0}

    def exponent(self, index: int) -> int:
        return self.powers[index]

    def mul(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(a + b for a, b in zip(self.powers, other.powers)))

    def grlex_key(self) -> tuple:
        # ascending grlex: by total degree, then x1 before x2 within a grade
        return (self.degree, tuple(-p for p in self.powers))

    def __str__(self) -> str:
        if self.degree == 0:
            return "1"
        return "*".join(
            f"x{i + 1}" if p == 1 else f"x{i + 1}^{p}"
            for i, p in enumerate(self.powers)
            if p
        )


def monomial_basis(n: int, d: int, *, size: int | None = None) -> list[Monomial]:
    """All monomials of total degree <= d in the first n variables,
    graded-lexicographic order. Count is C(n+d, d).

    `size` pads the exponent vectors (extra trailing variables at power 0) so
    the basis composes with polynomials over a larger table.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if d < 0:
        raise ValueError("d must be >= 0")
    if size is None:
        size = n
    if size < n:
        raise ValueError("size must be >= n")

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for head in range(total, -1, -1):
            for rest in compositions(total - head, parts - 1):
                yield (head,) + rest

    out: list[Monomial] = []
    pad = (0,) * (size - n)
    for deg in range(d + 1):
        out.extend(Monomial(c + pad) for c in compositions(deg, n))
    out.sort(key=Monomial.grlex_key)
    return out


class Polynomial:
    """Immutable sparse polynomial over a :class:`VariableTable`.

    Terms map :class:`Monomial` to a nonzero Fraction; the map is canonical
    (zero coefficients dropped). The zero polynomial has degree -1.
    """

    __slots__ = ("table", "terms")

    def __init__(self, table: VariableTable, terms: Mapping[Monomial, NumberLike] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if len(mono.powers) != table.size:
                    raise DimensionMismatchError(
                        f"monomial over {len(mono.powers)} variables in a "
                        f"{table.size}-variable table"
                    )
                frac = to_fraction(coeff)
                if frac != 0:
                    acc = clean.get(mono)
                    frac = frac if acc is None else acc + frac
                    if frac != 0:
                        clean[mono] = frac
                    elif acc is not None:
                        del clean[mono]
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("Polynomial is immutable")

    def __getstate__(self):
        return (self.table, self.terms)

    def __setstate__(self, state):
        object.__setattr__(self, "table", state[0])
        object.__setattr__(self, "terms", state[1])

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(table: VariableTable) -> "Polynomial":
        return Polynomial(table)

    @staticmethod
    def constant(table: VariableTable, value: NumberLike) -> "Polynomial":
        return Polynomial(table, {Monomial.unit(table.size): value})

    @staticmethod
    def variable(table: VariableTable, index: int) -> "Polynomial":
        if not 0 <= index < table.size:
            raise DimensionMismatchError(f"variable index {index} out of range")
        return Polynomial(table, {Monomial.variable(index, table.size): 1})

    @staticmethod
    def coerce(table: VariableTable, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.table != table:
                raise DimensionMismatchError("polynomial over a different table")
            return value
        return Polynomial.constant(table, value)

    # -- structure ----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(m.degree for m in self.terms)

    def degree_in(self, indices: Iterable[int]) -> int:
        idx = tuple(indices)
        if not self.terms:
            return -1
        return max(sum(m.powers[i] for i in idx) for m in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def uses_variable(self, index: int) -> bool:
        return any(m.powers[index] for m in self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.table == other.table
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.table, frozenset(self.terms.items())))

    # -- ring operations ----------------------------------------------------

    def _check_table(self, other: "Polynomial"):
        if self.table != other.table:
            raise DimensionMismatchError("polynomials over different tables")

    def __add__(self, other) -> "Polynomial":
        other = Polynomial.coerce(self.table, other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = out.get(mono, Fraction(0)) + coeff
            if acc == 0:
                out.pop(mono, None)
            else:
                out[mono] = acc
        return Polynomial(self.table, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-Polynomial.coerce(self.table, other))

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check_table(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = m1.mul(m2)
                acc = out.get(mono, Fraction(0)) + c1 * c2
                if acc == 0:
                    out.pop(mono, None)
                else:
                    out[mono] = acc
        return Polynomial(self.table, out)

    __rmul__ = __mul__

    def scale(self, k: NumberLike) -> "Polynomial":
        frac = to_fraction(k)
        if frac == 0:
            return Polynomial.zero(self.table)
        return Polynomial(self.table, {m: c * frac for m, c in self.terms.items()})

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise NonPolynomialError(f"exponent must be a nonnegative integer, got {exponent!r}")
        result = Polynomial.constant(self.table, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- calculus -----------------------------------------------------------

    def differentiate(self, index: int, order: int = 1) -> "Polynomial":
        """Exact formal partial derivative of the given order (1 or 2)."""
        if order not in (1, 2):
            raise ValueError("order must be 1 or 2")
        if not 0 <= index < self.table.size:
            raise DimensionMismatchError(f"variable index {index} out of range")
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            p = mono.powers[index]
            if p == 0:
                continue
            powers = list(mono.powers)
            powers[index] = p - 1
            out[Monomial(tuple(powers))] = coeff * p
        d1 = Polynomial(self.table, out)
        return d1 if order == 1 else d1.differentiate(index, 1)

    def substitute(self, bindings: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Expanded composition; unbound variables map to themselves."""
        for idx, val in bindings.items():
            if not 0 <= idx < self.table.size:
                raise DimensionMismatchError(f"binding index {idx} out of range")
            if val.table != self.table:
                raise DimensionMismatchError("binding over a different table")
        # cache powers of each binding as they are needed
        pow_cache: dict[tuple[int, int], Polynomial] = {}

        def power_of(idx: int, exp: int) -> Polynomial:
            key = (idx, exp)
            cached = pow_cache.get(key)
            if cached is None:
                base = bindings.get(idx) or Polynomial.variable(self.table, idx)
                cached = base ** exp
                pow_cache[key] = cached
            return cached

        total = Polynomial.zero(self.table)
        for mono, coeff in self.terms.items():
            term = Polynomial.constant(self.table, coeff)
            for idx, exp in mono.exponents().items():
                term = term * power_of(idx, exp)
            total = total + term
        return total

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, point: Sequence[float]) -> float:
        """Numeric value at a point (length must equal the table size)."""
        if len(point) != self.table.size:
            raise DimensionMismatchError(
                f"point of length {len(point)} for {self.table.size} variables"
            )
        # cache float powers per variable, accumulate per term
        max_pow = [0] * self.table.size
        for mono in self.terms:
            for i, p in enumerate(mono.powers):
                if p > max_pow[i]:
                    max_pow[i] = p
        powers: list[list[float]] = []
        for i, mp in enumerate(max_pow):
            col = [1.0]
            v = float(point[i])
            for _ in range(mp):
                col.append(col[-1] * v)
            powers.append(col)
        total = 0.0
        for mono, coeff in self.terms.items():
            val = float(coeff)
            for i, p in enumerate(mono.powers):
                if p:
                    val *= powers[i][p]
            total += val
        return total

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation at an (N, size) array of points."""
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.table.size:
            raise DimensionMismatchError(
                f"expected points of shape (N, {self.table.size})"
            )
        if not self.terms:
            return np.zeros(points.shape[0])
        exps = np.array([m.powers for m in self.terms], dtype=float)
        coeffs = np.array([float(c) for c in self.terms.values()])
        # (N, T): product over variables of point^exponent
        vals = np.prod(points[:, None, :] ** exps[None, :, :], axis=2)
        return vals @ coeffs

    # -- projection between tables ------------------------------------------

    def project_to_state(self) -> "Polynomial":
        """Rebuild over a state-only table; noise variables must not appear."""
        n, m = self.table.n, self.table.m
        if m == 0:
            return self
        if self.degree_in(self.table.noise_indices()) > 0:
            raise DimensionMismatchError("polynomial still contains noise variables")
        new_table = VariableTable(self.table.state_names)
        return Polynomial(
            new_table, {Monomial(mono.powers[:n]): c for mono, c in self.terms.items()}
        )

    def embed(self, table: VariableTable) -> "Polynomial":
        """Reinterpret over a larger table sharing the leading variables."""
        if table.size < self.table.size:
            raise DimensionMismatchError("target table is smaller")
        pad = (0,) * (table.size - self.table.size)
        return Polynomial(
            table, {Monomial(mono.powers + pad): c for mono, c in self.terms.items()}
        )

    # -- canonical output ---------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lex order (leading term first)."""
        return sorted(self.terms.items(), key=lambda kv: kv[0].grlex_key(), reverse=True)

    def to_text(self) -> str:
        """Canonical text form: descending graded-lex, explicit `*` and `^`."""
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for k, (mono, coeff) in enumerate(self.sorted_terms()):
            neg = coeff < 0
            mag = -coeff if neg else coeff
            factors = [
                (self.table.name(i) if p == 1 else f"{self.table.name(i)}^{p}")
                for i, p in enumerate(mono.powers)
                if p
            ]
            if not factors:
                body = format_coefficient(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_coefficient(mag)] + factors)
            if k == 0:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(pieces)

    def to_structured(self) -> list[dict]:
        """Canonical structured form: [{exponents, coeff}] in text-form order."""
        return [
            {"exponents": list(mono.powers), "coeff": format_coefficient(coeff)}
            for mono, coeff in self.sorted_terms()
        ]

    @staticmethod
    def from_structured(table: VariableTable, entries: Iterable[Mapping]) -> "Polynomial":
        terms: dict[Monomial, Fraction] = {}
        for entry in entries:
            mono = Monomial(tuple(int(e) for e in entry["exponents"]))
            terms[mono] = to_fraction(str(entry["coeff"]))
        return Polynomial(table, terms)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r})"


def format_coefficient(value: Fraction) -> str:
    """Decimal string for output; exact whenever the value is float-representable.

    Certificate coefficients are float-derived, so `Fraction(repr(float(v)))`
    reproduces them exactly and serialized polynomials reparse identically.
    """
    return repr(float(value))


# --------------------------------------------------------------------------
# Expression parser
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)

_FUNCTION_NAMES = {
    "sin", "cos", "tan", "exp", "log", "ln", "sqrt", "abs", "sinh", "cosh", "tanh",
}


class _Parser:
    """Recursive-descent parser for the restricted polynomial grammar:

        expr   := term (('+'|'-') term)*
        term   := factor (('*'|'/') factor)*
        factor := ('-'|'+')* base ('^' INT)?        ('**' is accepted for '^')
        base   := NUMBER | NAME | '(' expr ')'

    Division only by (subexpressions evaluating to) nonzero constants;
    exponents are literal nonnegative integers; any function call is rejected.
    """

    def __init__(self, text: str, table: VariableTable):
        self.text = text
        self.table = table
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> list[tuple[str, str]]:
        tokens: list[tuple[str, str]] = []
        pos = 0
        while pos < len(text):
            match = _TOKEN_RE.match(text, pos)
            if not match or match.end() == pos:
                rest = text[pos:].strip()
                if not rest:
                    break
                raise PolynomialSyntaxError(
                    f"unexpected character {rest[0]!r} at position {pos}"
                )
            pos = match.end()
            kind = match.lastgroup
            tokens.append((kind, match.group(kind)))
        tokens.append(("end", ""))
        return tokens

    def _peek(self) -> tuple[str, str]:
        return self.tokens[self.pos]

    def _next(self) -> tuple[str, str]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        result = self._expr()
        kind, value = self._peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected token {value!r}")
        return result

    def _expr(self) -> Polynomial:
        result = self._term()
        while True:
            kind, value = self._peek()
            if kind == "op" and value in "+-":
                self._next()
                rhs = self._term()
                result = result + rhs if value == "+" else result - rhs
            else:
                return result

    def _term(self) -> Polynomial:
        result = self._factor()
        while True:
            kind, value = self._peek()
            if kind == "op" and value in "*/":
                self._next()
                rhs = self._factor()
                if value == "*":
                    result = result * rhs
                else:
                    if rhs.degree > 0:
                        raise NonPolynomialError("division by a non-constant expression")
                    divisor = rhs.coefficient(Monomial.unit(self.table.size))
                    if divisor == 0:
                        raise NonPolynomialError("division by zero")
                    result = result.scale(Fraction(1) / divisor)
            else:
                return result

    def _factor(self) -> Polynomial:
        kind, value = self._peek()
        if kind == "op" and value in "+-":
            self._next()
            inner = self._factor()
            return inner if value == "+" else -inner
        base = self._base()
        kind, value = self._peek()
        if kind == "op" and value in ("^", "**"):
            self._next()
            exponent = self._exponent()
            base = base ** exponent
            kind, value = self._peek()
            if kind == "op" and value in ("^", "**"):
                raise PolynomialSyntaxError("chained exponents are ambiguous; use parentheses")
        return base

    def _exponent(self) -> int:
        kind, value = self._peek()
        if kind == "op" and value == "-":
            raise NonPolynomialError("negative exponents are not polynomial")
        if kind != "number":
            raise PolynomialSyntaxError(f"expected integer exponent, got {value!r}")
        self._next()
        if not re.fullmatch(r"\d+", value):
            raise NonPolynomialError(f"fractional exponent {value!r} is not polynomial")
        return int(value)

    def _base(self) -> Polynomial:
        kind, value = self._next()
        if kind == "number":
            return Polynomial.constant(self.table, to_fraction(value))
        if kind == "name":
            nk, nv = self._peek()
            if nk == "op" and nv == "(":
                hint = "transcendental" if value in _FUNCTION_NAMES else "function"
                raise NonPolynomialError(f"{hint} call {value!r} is not polynomial")
            try:
                index = self.table.index(value)
            except KeyError:
                raise UnknownSymbolError(f"undeclared identifier {value!r}") from None
            return Polynomial.variable(self.table, index)
        if kind == "op" and value == "(":
            inner = self._expr()
            kind, value = self._next()
            if not (kind == "op" and value == ")"):
                raise PolynomialSyntaxError("missing closing parenthesis")
            return inner
        raise PolynomialSyntaxError(f"unexpected token {value!r}")


def parse_polynomial(text: str, table: VariableTable) -> Polynomial:
    """Parse an expression string into an expanded canonical polynomial.

    Grammar: numbers, declared variable names, `+ - * / ^ ( )` (with `**`
    accepted for `^`), unary minus, literal integer exponents >= 0, division
    only by nonzero constants. All model constants must be inlined as numeric
    literals.
    """
    if not isinstance(text, str) or not text.strip():
        raise PolynomialSyntaxError("empty expression")
    return _Parser(text, table).parse()
