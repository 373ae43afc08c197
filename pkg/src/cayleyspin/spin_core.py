"""Spin-j angular momentum matrices.

Basis order is descending magnetic quantum number, m = j, j-1, ..., -j.
Spin is carried as the integer ``two_j`` so half-integers never need a
fraction or float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np
from flint import acb, acb_mat

from ._precise import to_arb
from .errors import ZeroAxis

MIN_AXIS_NORM = 1e-9


@dataclass(frozen=True, order=True)
class SpinLabel:
    two_j: int

    def __post_init__(self):
        if not isinstance(self.two_j, (int, np.integer)) or isinstance(self.two_j, bool):
            raise TypeError(f"two_j must be an integer, got {self.two_j!r}")
        if self.two_j < 0:
            raise ValueError(f"two_j must be nonnegative, got {self.two_j}")
        object.__setattr__(self, "two_j", int(self.two_j))

    @classmethod
    def from_j(cls, j: Fraction | int | float | str) -> "SpinLabel":
        """Build from j itself: 1, 0.5, Fraction(3, 2) or "3/2"."""
        twice = 2 * Fraction(j)
        if twice.denominator != 1:
            raise ValueError(f"spin {j!r} is not a multiple of 1/2")
        return cls(int(twice))

    @classmethod
    def parse(cls, text: str) -> "SpinLabel":
        """Parse "3/2", "1.5" or "2"; conversion is exact."""
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse spin {text!r}") from exc
        return cls.from_j(value)

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def is_integer(self) -> bool:
        return self.two_j % 2 == 0

    def magnetic_numbers(self) -> list[Fraction]:
        return [self.j - a for a in range(self.dim)]

    def __str__(self) -> str:
        return str(self.j)


@dataclass(frozen=True)
class Axis:
    """Unit rotation axis. Use :meth:`from_vector` to normalize raw input."""

    nx: float
    ny: float
    nz: float

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> "Axis":
        x, y, z = (float(c) for c in v)
        norm = math.sqrt(x * x + y * y + z * z)
        if not norm >= MIN_AXIS_NORM:
            raise ZeroAxis(f"axis norm {norm:.3g} below {MIN_AXIS_NORM:g}")
        return cls(x / norm, y / norm, z / norm)

    @classmethod
    def z(cls) -> "Axis":
        return cls(0.0, 0.0, 1.0)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.nx, self.ny, self.nz)


def as_axis(n: Axis | Sequence[float]) -> Axis:
    return n if isinstance(n, Axis) else Axis.from_vector(n)


def build_j3(j: SpinLabel) -> np.ndarray:
    m = np.array([float(v) for v in j.magnetic_numbers()])
    return np.diag(m).astype(complex)


def _ladder_amplitudes(j: SpinLabel) -> list[Fraction]:
    # squared J+ matrix element from m to m+1, for m = j-1, ..., -j
    jj = j.j
    return [jj * (jj + 1) - m * (m + 1) for m in j.magnetic_numbers()[1:]]


def build_ladder(j: SpinLabel, direction: Literal["raise", "lower"]) -> np.ndarray:
    d = j.dim
    plus = np.zeros((d, d), dtype=complex)
    for a, sq in enumerate(_ladder_amplitudes(j), start=1):
        # column a is m = j - a; J+ sends it to row a - 1
        plus[a - 1, a] = math.sqrt(sq)
    if direction == "raise":
        return plus
    if direction == "lower":
        return plus.conj().T.copy()
    raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")


def generators(j: SpinLabel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (J1, J2, J3)."""
    plus = build_ladder(j, "raise")
    minus = build_ladder(j, "lower")
    return (plus + minus) / 2, (plus - minus) / 2j, build_j3(j)


def axis_contraction(j: SpinLabel, n: Axis | Sequence[float]) -> np.ndarray:
    """n.J = nx J1 + ny J2 + nz J3."""
    n = as_axis(n)
    j1, j2, j3 = generators(j)
    return n.nx * j1 + n.ny * j2 + n.nz * j3


def axis_contraction_acb(j: SpinLabel, n: Axis | Sequence[float], scale: complex = 1) -> acb_mat:
    """``scale * n.J`` as an arb matrix with entries good to the working precision.

    The axis is renormalized in extended precision, so the spectrum sits on
    scale * {j, ..., -j} far below double rounding. Call inside ``workprec``.
    """
    n = as_axis(n)
    nx, ny, nz = (to_arb(c) for c in n.as_tuple())
    norm = (nx * nx + ny * ny + nz * nz).sqrt()
    nx, ny, nz = nx / norm, ny / norm, nz / norm
    s = acb(to_arb(complex(scale).real), to_arb(complex(scale).imag))
    d = j.dim
    out = acb_mat(d, d)
    for a, m in enumerate(j.magnetic_numbers()):
        out[a, a] = s * nz * to_arb(m)
    # n.J = (nx - i ny)/2 J+ + (nx + i ny)/2 J-
    up = s * acb(nx, -ny) / 2
    down = s * acb(nx, ny) / 2
    for a, sq in enumerate(_ladder_amplitudes(j), start=1):
        amp = to_arb(sq).sqrt()
        out[a - 1, a] = up * amp
        out[a, a - 1] = down * amp
    return out


def spin_generator_product(j: SpinLabel, n: Axis | Sequence[float]) -> tuple[np.ndarray, float]:
    """Cayley-Hamilton product prod_m (n.J - m I) and the largest partial-product norm."""
    nj = axis_contraction(j, n)
    eye = np.eye(j.dim)
    prod = eye.astype(complex)
    largest = 1.0
    for m in j.magnetic_numbers():
        prod = prod @ (nj - float(m) * eye)
        largest = max(largest, float(np.abs(prod).max()))
    return prod, largest

