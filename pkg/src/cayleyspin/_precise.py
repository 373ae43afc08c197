"""Extended-precision helpers built on arb ball arithmetic (python-flint).

Matrix polynomials in the monomial basis of ``2i n.J`` cancel heavily once
two_j passes ~15: the sum of absolute term sizes reaches 1e10-1e11 at
two_j = 25 while the result has unit size. Both coefficients and the matrix
argument are therefore carried at ``WORKING_PREC`` bits and rounded to
complex128 once, at the end.
"""

from __future__ import annotations

import contextlib
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np
from flint import acb, acb_mat, arb, ctx, fmpq

WORKING_PREC = 128


@contextlib.contextmanager
def workprec(bits: int = WORKING_PREC) -> Iterator[None]:
    # flint precision is process-global; restore on exit
    with ctx.workprec(bits):
        yield


def to_arb(value: Fraction | float | int) -> arb:
    if isinstance(value, Fraction):
        return arb(fmpq(value.numerator, value.denominator))
    return arb(fmpq(*float(value).as_integer_ratio()))


def to_acb(value: Fraction | float | int | complex) -> acb:
    if isinstance(value, complex):
        return acb(to_arb(value.real), to_arb(value.imag))
    return acb(to_arb(value))


def acb_from_array(a: np.ndarray) -> acb_mat:
    rows, cols = a.shape
    out = acb_mat(rows, cols)
    for r in range(rows):
        for c in range(cols):
            v = complex(a[r, c])
            if v:
                out[r, c] = to_acb(v)
    return out


def array_from_acb(m: acb_mat) -> np.ndarray:
    rows, cols = m.nrows(), m.ncols()
    out = np.empty((rows, cols), dtype=complex)
    for r in range(rows):
        for c in range(cols):
            z = m[r, c]
            out[r, c] = complex(float(z.real), float(z.imag))
    return out


def identity(n: int) -> acb_mat:
    out = acb_mat(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def matrix_horner(coeffs: Sequence[acb], x: acb_mat) -> acb_mat:
    """Evaluate sum_k coeffs[k] x^k with len(coeffs) - 1 matrix products."""
    n = x.nrows()
    result = acb_mat(n, n)
    if not coeffs:
        return result
    for i in range(n):
        result[i, i] = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        result = result * x
        for i in range(n):
            result[i, i] += c
    return result
