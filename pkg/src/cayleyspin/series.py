"""Truncated power series in one indeterminate with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")


@dataclass(frozen=True)
class RationalSeries:
    """``coeffs[m]`` multiplies x**m; terms past ``order`` are discarded."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def of(cls, coeffs: Iterable[Fraction | int | str]) -> "RationalSeries":
        return cls(tuple(Fraction(c) for c in coeffs))

    @classmethod
    def one(cls, order: int = 0) -> "RationalSeries":
        return cls((Fraction(1),) + (Fraction(0),) * order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, m: int) -> Fraction:
        return self.coeffs[m]

    def __len__(self) -> int:
        return len(self.coeffs)

    def evaluate(self, x: T, convert: Callable[[Fraction], T] | None = None) -> T:
        """Horner evaluation at ``x``.

        With ``convert=None`` the arithmetic stays exact for Fraction ``x``;
        pass ``float`` or an arb converter to evaluate in that number type.
        """
        cs = self.coeffs if convert is None else [convert(c) for c in self.coeffs]
        acc = cs[-1]
        for c in reversed(cs[:-1]):
            acc = acc * x + c
        return acc


def trunc(s: RationalSeries, n: int) -> RationalSeries:
    if n < 0:
        raise ValueError(f"truncation order must be >= 0, got {n}")
    kept = s.coeffs[: n + 1]
    return RationalSeries(kept + (Fraction(0),) * (n + 1 - len(kept)))


def mul_trunc(a: RationalSeries, b: RationalSeries, n: int) -> RationalSeries:
    """Cauchy product of ``a`` and ``b`` through x**n."""
    if n < 0:
        raise ValueError(f"truncation order must be >= 0, got {n}")
    ac, bc = a.coeffs, b.coeffs
    out = []
    for m in range(n + 1):
        lo = max(0, m - len(bc) + 1)
        hi = min(m, len(ac) - 1)
        out.append(sum((ac[i] * bc[m - i] for i in range(lo, hi + 1)), Fraction(0)))
    return RationalSeries(tuple(out))


def pow_trunc(s: RationalSeries, k: int, n: int) -> RationalSeries:
    """s**k through x**n by binary exponentiation, truncating after each product."""
    if k < 0:
        raise ValueError(f"exponent must be >= 0, got {k}")
    result = RationalSeries.one(n)
    base = trunc(s, n)
    while k:
        if k & 1:
            result = mul_trunc(result, base, n)
        k >>= 1
        if k:
            base = mul_trunc(base, base, n)
    return result


@lru_cache(maxsize=None)
def arcsin_ratio_series(n: int) -> RationalSeries:
    """arcsin(sqrt(x)) / sqrt(x) through x**n."""
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    return RationalSeries(
        tuple(Fraction(comb(2 * m, m), 4**m * (2 * m + 1)) for m in range(n + 1))
    )


@lru_cache(maxsize=None)
def inv_sqrt_one_minus_series(n: int) -> RationalSeries:
    """(1 - x)**(-1/2) through x**n."""
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    return RationalSeries(tuple(Fraction(comb(2 * m, m), 4**m) for m in range(n + 1)))
