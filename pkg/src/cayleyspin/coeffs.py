"""Coefficient engines for the exponential (CFZ) and Cayley/resolvent spin polynomials.

All three expansions are polynomials of degree 2j in ``X = 2i n.J``::

    exp(i theta n.J)                         = sum_k A_k(theta) / k! * X**k
    (1 - 2i alpha n.J)^-1                    = sum_k B_k(alpha) * X**k
    (1 + 2i alpha n.J)(1 - 2i alpha n.J)^-1  = sum_k C_k(alpha) * X**k

with C_0 = 2 B_0 - 1 and C_k = 2 B_k for k >= 1.

Coefficient formulas are exact rational series up to the final evaluation.
Matrix sums are evaluated by Horner's rule at ``WORKING_PREC`` bits with an
extended-precision ``n.J``; see ``_precise`` for why double precision is not
enough beyond two_j ~ 15.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from flint import acb, acb_mat, arb

from . import _precise
from ._precise import to_acb, to_arb, workprec
from .errors import HalfIntegerSpin, IndexOutOfRange, SingularResolvent
from .series import (
    RationalSeries,
    arcsin_ratio_series,
    inv_sqrt_one_minus_series,
    mul_trunc,
    pow_trunc,
)
from .spin_core import Axis, SpinLabel, axis_contraction_acb

SINGULAR_DET_RTOL = 1e-12


@dataclass(frozen=True)
class CfzCoefficientSet:
    j: SpinLabel
    theta: float
    values: tuple[float, ...]


@dataclass(frozen=True)
class CayleyCoefficientSet:
    j: SpinLabel
    alpha: float
    resolvent_values: tuple[float, ...]
    cayley_values: tuple[float, ...]


@dataclass(frozen=True)
class DetPolynomial:
    """det(1 - 2i alpha n.J) as a polynomial in alpha**2."""

    j: SpinLabel
    even_coeffs: tuple[Fraction, ...]

    def series(self) -> RationalSeries:
        """The same polynomial in powers of alpha (odd coefficients zero)."""
        out = []
        for c in self.even_coeffs:
            out += [c, Fraction(0)]
        return RationalSeries(tuple(out[:-1]))

    def evaluate(self, alpha):
        return RationalSeries(self.even_coeffs).evaluate(alpha * alpha)


@dataclass(frozen=True)
class CharPolyCoeffs:
    """Coefficients of det(1 - itM) in powers of t."""

    n: int
    coeffs: tuple[complex, ...]


def _check_k(j: SpinLabel, k: int) -> None:
    if not 0 <= k <= j.two_j:
        raise IndexOutOfRange(f"k={k} outside 0..{j.two_j} for spin {j}")


def epsilon(j: SpinLabel, k: int) -> int:
    """Parity of 2j - k: 0 for even, 1 for odd."""
    _check_k(j, k)
    return (j.two_j - k) % 2


@lru_cache(maxsize=None)
def _cfz_series(two_j: int, k: int) -> RationalSeries:
    j = SpinLabel(two_j)
    eps = epsilon(j, k)
    n = (two_j - k) // 2  # floor(j - k/2)
    p = pow_trunc(arcsin_ratio_series(n), k, n)
    if eps:
        p = mul_trunc(inv_sqrt_one_minus_series(n), p, n)
    return p


def cfz_series(j: SpinLabel, k: int) -> RationalSeries:
    """Truncated series in x = sin^2(theta/2) multiplying sin^k cos^eps in A_k."""
    _check_k(j, k)
    return _cfz_series(j.two_j, k)


def cfz_coefficient(j: SpinLabel, k: int, theta: float) -> float:
    """A_k(theta) in double precision.

    The truncated series has positive coefficients and x lies in [0, 1], so the
    float evaluation loses nothing to cancellation.
    """
    p = cfz_series(j, k)
    s, c = math.sin(theta / 2), math.cos(theta / 2)
    return s**k * c ** epsilon(j, k) * p.evaluate(s * s, float)


def cfz_coefficients(j: SpinLabel, theta: float) -> CfzCoefficientSet:
    return CfzCoefficientSet(j, float(theta), tuple(cfz_coefficient(j, k, theta) for k in range(j.dim)))


def cfz_weights_acb(j: SpinLabel, theta: float) -> list[acb]:
    # A_k / k! at working precision; call inside workprec
    half = to_arb(theta) / 2
    s, c = half.sin(), half.cos()
    x = s * s
    out = []
    for k in range(j.dim):
        value = s**k * cfz_series(j, k).evaluate(x, to_arb)
        if epsilon(j, k):
            value = value * c
        out.append(acb(value / math.factorial(k)))
    return out


def cfz_polynomial(j: SpinLabel, theta: float, n: Axis | Sequence[float]) -> np.ndarray:
    """exp(i theta n.J) through its degree-2j polynomial form."""
    with workprec():
        x = axis_contraction_acb(j, n, 2j)
        u = _precise.matrix_horner(cfz_weights_acb(j, theta), x)
        return _precise.array_from_acb(u)


@lru_cache(maxsize=None)
def _det_even(two_j: int) -> tuple[Fraction, ...]:
    if two_j % 2 == 0:
        weights = [4 * p * p for p in range(1, two_j // 2 + 1)]
    else:
        # 4 (p - 1/2)^2 = (2p - 1)^2
        weights = [(2 * p - 1) ** 2 for p in range(1, (two_j + 1) // 2 + 1)]
    coeffs = [1]
    for w in weights:
        coeffs = [a + w * b for a, b in zip(coeffs + [0], [0] + coeffs)]
    return tuple(Fraction(c) for c in coeffs)


def det_polynomial(j: SpinLabel) -> DetPolynomial:
    return DetPolynomial(j, _det_even(j.two_j))


def resolvent_exact(j: SpinLabel, alpha: Fraction) -> list[Fraction]:
    """B_k(alpha) = alpha^k Trunc_{2j-k}[det](alpha) / det(alpha), exactly."""
    alpha = Fraction(alpha)
    det = det_polynomial(j).series().coeffs
    partial = []
    acc, power = Fraction(0), Fraction(1)
    for c in det:
        acc += c * power
        power *= alpha
        partial.append(acc)
    full = partial[-1]
    return [alpha**k * partial[min(j.two_j - k, len(partial) - 1)] / full for k in range(j.dim)]


def cayley_exact(j: SpinLabel, alpha: Fraction) -> list[Fraction]:
    b = resolvent_exact(j, alpha)
    return [2 * b[0] - 1] + [2 * v for v in b[1:]]


def resolvent_coefficients(j: SpinLabel, alpha: float) -> CayleyCoefficientSet:
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise ValueError(f"alpha must be finite, got {alpha}")
    b = tuple(float(v) for v in resolvent_exact(j, Fraction(alpha)))
    a = (2 * b[0] - 1,) + tuple(2 * v for v in b[1:])
    return CayleyCoefficientSet(j, alpha, b, a)


def _spin_polynomial(j: SpinLabel, coeffs: Sequence[Fraction], n: Axis | Sequence[float]) -> np.ndarray:
    with workprec():
        x = axis_contraction_acb(j, n, 2j)
        return _precise.array_from_acb(_precise.matrix_horner([to_acb(c) for c in coeffs], x))


def resolvent_polynomial(j: SpinLabel, alpha: float, n: Axis | Sequence[float]) -> np.ndarray:
    """(1 - 2i alpha n.J)^-1 as sum_k B_k (2i n.J)^k."""
    return _spin_polynomial(j, resolvent_exact(j, Fraction(float(alpha))), n)


def cayley_polynomial(j: SpinLabel, alpha: float, n: Axis | Sequence[float]) -> np.ndarray:
    """(1 + 2i alpha n.J)(1 - 2i alpha n.J)^-1 as sum_k C_k (2i n.J)^k."""
    return _spin_polynomial(j, cayley_exact(j, Fraction(float(alpha))), n)


def central_factorial_magnitudes(j: SpinLabel) -> list[int]:
    """|t(2j+2, 2j+2-2m)| for m = 0..j, read off the determinant coefficients."""
    if not j.is_integer:
        raise HalfIntegerSpin(f"central factorial form needs integer spin, got {j}")
    out = []
    for m, c in enumerate(det_polynomial(j).even_coeffs):
        q = c / 4**m
        assert q.denominator == 1
        out.append(q.numerator)
    return out


def _faddeev_leverrier(a: acb_mat) -> list[acb]:
    # coefficients c_k of det(lambda - A) = sum_k c_k lambda^(N-k)
    n = a.nrows()
    coeffs = [acb(1)]
    aux = _precise.identity(n)
    for k in range(1, n + 1):
        prod = a * aux
        c = -prod.trace() / k
        coeffs.append(c)
        aux = prod
        for i in range(n):
            aux[i, i] += c
    return coeffs


def det_one_minus_itm(m: np.ndarray) -> CharPolyCoeffs:
    """Coefficients of det(1 - itM) in t via the Faddeev-LeVerrier trace recursion."""
    m = np.asarray(m, dtype=complex)
    with workprec():
        coeffs = _faddeev_leverrier(_precise.acb_from_array(1j * m))
        return CharPolyCoeffs(m.shape[0], tuple(complex(c) for c in coeffs))


def general_resolvent_polynomial(m: np.ndarray, t: float) -> tuple[list[complex], np.ndarray]:
    """Coefficients B_k(t) and the matrix sum_k B_k (iM)^k equal to (1 - itM)^-1.

    B_k(t) = t^k Trunc_{N-1-k}[d](t) / d(t) with d(t) = det(1 - itM). The
    characteristic coefficients come from the trace recursion, run at
    extended precision on the exact double entries of M.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"M must be square, got shape {m.shape}")
    t = float(t)
    n = m.shape[0]
    with workprec():
        a = _precise.acb_from_array(1j * m)
        d = _faddeev_leverrier(a)
        tt = to_arb(t)
        terms = [c * tt**p for p, c in enumerate(d)]
        partial = []
        acc = acb(0)
        for term in terms:
            acc += term
            partial.append(acc)
        full = partial[-1]
        scale = sum((abs(term) for term in terms), arb(0))
        if not abs(full) > SINGULAR_DET_RTOL * scale:
            raise SingularResolvent(f"|det(1 - itM)| = {float(abs(full)):.3g} at t={t}")
        b = [tt**k * partial[n - 1 - k] / full for k in range(n)]
        matrix = _precise.array_from_acb(_precise.matrix_horner(b, a))
        return [complex(v) for v in b], matrix
