"""Noise models and the expectation operator over noise variables.

Turns a polynomial in (x, noise) into a polynomial in x by replacing each
noise monomial with its raw moment, using independence across dimensions.
Moments are computed in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import MomentOrderExceededError
from .poly import Monomial, Polynomial, decimal_fraction

DEFAULT_MAX_MOMENT_ORDER = 16


@dataclass(frozen=True)
class NoiseSpec:
    """Per-dimension additive noise: i.i.d. across time, independent across
    dimensions. `sigma` holds standard deviations (diagonal covariance)."""

    kind: str  # "normal" | "uniform" | "exponential"
    mean: tuple[Fraction, ...] = ()
    sigma: tuple[Fraction, ...] = ()
    a: tuple[Fraction, ...] = ()
    b: tuple[Fraction, ...] = ()
    rate: tuple[Fraction, ...] = ()
    max_moment_order: int = DEFAULT_MAX_MOMENT_ORDER

    def __post_init__(self):
        if self.kind == "normal":
            if len(self.mean) != len(self.sigma) or not self.mean:
                raise ValueError("normal noise needs matching mean/sigma arrays")
            if any(s < 0 for s in self.sigma):
                raise ValueError("standard deviations must be >= 0")
        elif self.kind == "uniform":
            if len(self.a) != len(self.b) or not self.a:
                raise ValueError("uniform noise needs matching a/b arrays")
            if any(hi < lo for lo, hi in zip(self.a, self.b)):
                raise ValueError("uniform noise needs b >= a per dimension")
        elif self.kind == "exponential":
            if not self.rate:
                raise ValueError("exponential noise needs a rate array")
            if any(r <= 0 for r in self.rate):
                raise ValueError("rates must be > 0")
        else:
            raise ValueError(f"unknown noise kind {self.kind!r}")

    @staticmethod
    def normal(mean, sigma, max_moment_order=DEFAULT_MAX_MOMENT_ORDER) -> "NoiseSpec":
        return NoiseSpec(
            "normal",
            mean=tuple(decimal_fraction(v) for v in mean),
            sigma=tuple(decimal_fraction(v) for v in sigma),
            max_moment_order=max_moment_order,
        )

    @staticmethod
    def uniform(a, b, max_moment_order=DEFAULT_MAX_MOMENT_ORDER) -> "NoiseSpec":
        return NoiseSpec(
            "uniform",
            a=tuple(decimal_fraction(v) for v in a),
            b=tuple(decimal_fraction(v) for v in b),
            max_moment_order=max_moment_order,
        )

    @staticmethod
    def exponential(rate, max_moment_order=DEFAULT_MAX_MOMENT_ORDER) -> "NoiseSpec":
        return NoiseSpec(
            "exponential",
            rate=tuple(decimal_fraction(v) for v in rate),
            max_moment_order=max_moment_order,
        )

    @property
    def dim(self) -> int:
        if self.kind == "normal":
            return len(self.mean)
        if self.kind == "uniform":
            return len(self.a)
        return len(self.rate)


def raw_moment(spec: NoiseSpec, dim: int, k: int) -> Fraction:
    """E[noise_dim^k], exact.

    normal: m_k = mu*m_{k-1} + (k-1)*sigma^2*m_{k-2}
    uniform: (b^{k+1} - a^{k+1}) / ((k+1)(b-a)), point mass a^k when a == b
    exponential: k! / rate^k
    """
    if not 0 <= dim < spec.dim:
        raise IndexError(f"noise dimension {dim} out of range")
    if k < 0:
        raise ValueError("moment order must be >= 0")
    if k > spec.max_moment_order:
        raise MomentOrderExceededError(
            f"moment order {k} exceeds configured maximum {spec.max_moment_order}"
        )
    if k == 0:
        return Fraction(1)
    if spec.kind == "normal":
        mu, var = spec.mean[dim], spec.sigma[dim] ** 2
        prev2, prev1 = Fraction(1), mu
        for order in range(2, k + 1):
            prev2, prev1 = prev1, mu * prev1 + (order - 1) * var * prev2
        return prev1
    if spec.kind == "uniform":
        lo, hi = spec.a[dim], spec.b[dim]
        if lo == hi:
            return lo ** k
        return (hi ** (k + 1) - lo ** (k + 1)) / ((k + 1) * (hi - lo))
    return Fraction(math.factorial(k)) / spec.rate[dim] ** k


def expect_over_noise(p: Polynomial, spec: NoiseSpec) -> Polynomial:
    """E[p | x]: replace each noise monomial by its moments (independence);
    the state part of every term is untouched. The result has no noise
    variables."""
    table = p.table
    if spec.dim != table.m:
        raise ValueError(
            f"noise spec covers {spec.dim} dimensions, table has {table.m}"
        )
    n = table.n
    out: dict[Monomial, Fraction] = {}
    for mono, coeff in p.terms.items():
        weight = coeff
        for j in range(table.m):
            k = mono.powers[n + j]
            if k:
                weight *= raw_moment(spec, j, k)
        if weight == 0:
            continue
        state_mono = Monomial(mono.powers[:n] + (0,) * table.m)
        acc = out.get(state_mono, Fraction(0)) + weight
        if acc == 0:
            out.pop(state_mono, None)
        else:
            out[state_mono] = acc
    return Polynomial(table, out)
