"""Independent oracles and identity checks.

The oracles work in plain double precision on the float ``n.J`` from
``spin_core``: LU solves for the resolvent and a Hermitian eigendecomposition
for the exponential. They share nothing with the polynomial path in
``coeffs`` beyond the spin matrices.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np
import scipy.linalg
from scipy import integrate

from . import coeffs
from .errors import QuadratureNotConverged, SingularResolvent
from .spin_core import (
    Axis,
    SpinLabel,
    as_axis,
    axis_contraction,
    generators,
    spin_generator_product,
)

COMMUTATOR_TOL = 1e-12  # times d
CASIMIR_TOL = 1e-12  # times d**2
SPECTRUM_TOL = 1e-10
CAYLEY_HAMILTON_TOL = 1e-8
GENERAL_THEOREM_TOL = 1e-10
GENERAL_THEOREM_MAX_TWO_J = 12
HILLE_YOSIDA_MAX_TWO_J = 6
HILLE_YOSIDA_MAX_T = 2.0
QUAD_LIMIT = 500

DEFAULT_ALPHAS = (-5.0, -1.0, -0.5, -0.1, -0.01, 0.01, 0.1, 0.5, 1.0, 5.0)
DEFAULT_THETAS = (0.0, 0.1, 1.0, math.pi - 0.01, math.pi, 2 * math.pi, 3.7, 4 * math.pi)
DEFAULT_HY_TS = (-1.0, -0.5, 0.0, 0.5, 1.0)


@dataclass(frozen=True)
class ToleranceConfig:
    rel_matrix_tol: float = 1e-9
    unitarity_tol: float = 1e-10
    quad_tol: float = 1e-6
    quad_cutoff_base: float = 40.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class VerificationReport:
    identity_name: str
    parameters: dict[str, Any]
    residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.residual <= self.tolerance))

    def sort_key(self):
        return (self.identity_name, tuple(sorted(self.parameters.items())))

    def to_dict(self) -> dict[str, Any]:
        params = {k: list(v) if isinstance(v, tuple) else v for k, v in self.parameters.items()}
        return {
            "identity_name": self.identity_name,
            "parameters": params,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def random_axes(count: int, seed: int = 2024) -> list[Axis]:
    rng = np.random.default_rng(seed)
    return [Axis.from_vector(v) for v in rng.standard_normal((count, 3))]


@dataclass(frozen=True)
class SweepGrid:
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    thetas: tuple[float, ...] = DEFAULT_THETAS
    axes: tuple[Axis, ...] = field(default_factory=lambda: tuple(random_axes(20)))
    hille_yosida_ts: tuple[float, ...] = DEFAULT_HY_TS
    det_samples: int = 1000
    seed: int = 2024

    def __post_init__(self):
        if not (self.alphas and self.thetas and self.axes):
            raise ValueError("sweep grid needs at least one alpha, theta and axis")


def oracle_resolvent(j: SpinLabel, alpha: float, n: Axis | Sequence[float]) -> np.ndarray:
    """(I - 2i alpha n.J)^-1 by LU with partial pivoting."""
    a = np.eye(j.dim) - 2j * alpha * axis_contraction(j, n)
    with warnings.catch_warnings():
        warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
        try:
            lu = scipy.linalg.lu_factor(a)
        except (scipy.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as exc:
            raise SingularResolvent(str(exc)) from exc
    return scipy.linalg.lu_solve(lu, np.eye(j.dim, dtype=complex))


def oracle_cayley(j: SpinLabel, alpha: float, n: Axis | Sequence[float]) -> np.ndarray:
    x = 2j * alpha * axis_contraction(j, n)
    return (np.eye(j.dim) + x) @ oracle_resolvent(j, alpha, n)


def oracle_expm(j: SpinLabel, theta: float, n: Axis | Sequence[float]) -> np.ndarray:
    """exp(i theta n.J) from the Hermitian eigendecomposition of n.J."""
    h = axis_contraction(j, n)
    if not np.any(h - np.diag(np.diag(h))):
        return np.diag(np.exp(1j * theta * np.diag(h).real))
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * theta * w)) @ v.conj().T


def elementary_symmetric(values: Sequence[int]) -> list[int]:
    """e_0..e_n of ``values`` by the one-variable-at-a-time recurrence."""
    e = [1] + [0] * len(values)
    for count, v in enumerate(values, start=1):
        for m in range(count, 0, -1):
            e[m] += v * e[m - 1]
    return e


def max_abs(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


def unitarity_residual(u: np.ndarray) -> float:
    return max_abs(u @ u.conj().T - np.eye(u.shape[0]))


def hille_yosida_check(
    j: SpinLabel, k: int, t: float, cfg: ToleranceConfig | None = None
) -> VerificationReport:
    """Compare int_0^inf e^-s A_k(st)/k! ds against B_k(t/2).

    exp(i s t n.J) integrated against e^-s gives (1 - i t n.J)^-1, the
    resolvent at alpha = t/2, so the identity holds order by order in 2i n.J.
    """
    cfg = cfg or ToleranceConfig()
    if abs(t) > HILLE_YOSIDA_MAX_T:
        raise ValueError(f"|t| must be <= {HILLE_YOSIDA_MAX_T}, got {t}")
    kfact = math.factorial(k)
    series = coeffs.cfz_series(j, k)
    # |A_k| <= P(1) since P has positive coefficients and x in [0, 1]
    bound = float(series.evaluate(Fraction(1))) / kfact
    cutoff = cfg.quad_cutoff_base + 10 * abs(t) * j.dim
    cutoff = max(cutoff, math.log(10 * bound / cfg.quad_tol))
    tail = math.exp(-cutoff) * bound

    def integrand(s: float) -> float:
        return math.exp(-s) * coeffs.cfz_coefficient(j, k, s * t) / kfact

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            integrand, 0.0, cutoff, epsabs=cfg.quad_tol / 10, epsrel=0.0, limit=QUAD_LIMIT, full_output=1
        )
    value, abserr = out[0], out[1]
    if len(out) > 3 or abserr + tail > cfg.quad_tol:
        raise QuadratureNotConverged(
            f"two_j={j.two_j} k={k} t={t}: error estimate {abserr:.2e} + tail {tail:.2e}"
        )
    expected = float(coeffs.resolvent_exact(j, Fraction(t) / 2)[k])
    return VerificationReport(
        "hille_yosida", {"two_j": j.two_j, "k": k, "t": t}, abs(value - expected), cfg.quad_tol
    )


def spin_algebra_reports(j: SpinLabel, axes: Sequence[Axis]) -> list[VerificationReport]:
    d = j.dim
    j1, j2, j3 = generators(j)
    comm = max(
        max_abs(a @ b - b @ a - 1j * c) for a, b, c in ((j1, j2, j3), (j2, j3, j1), (j3, j1, j2))
    )
    casimir = max_abs(j1 @ j1 + j2 @ j2 + j3 @ j3 - float(j.j * (j.j + 1)) * np.eye(d))
    reports = [
        VerificationReport("commutator", {"two_j": j.two_j}, comm, COMMUTATOR_TOL * d),
        VerificationReport("casimir", {"two_j": j.two_j}, casimir, CASIMIR_TOL * d * d),
    ]
    expected = np.array(sorted(float(m) for m in j.magnetic_numbers()))
    for n in axes:
        w = np.linalg.eigvalsh(axis_contraction(j, n))
        params = {"two_j": j.two_j, "axis": n.as_tuple()}
        reports.append(
            VerificationReport("spectrum", params, float(np.abs(w - expected).max()), SPECTRUM_TOL)
        )
        prod, largest = spin_generator_product(j, n)
        reports.append(
            VerificationReport("cayley_hamilton", params, max_abs(prod) / largest, CAYLEY_HAMILTON_TOL)
        )
    return reports


def resolvent_reports(
    j: SpinLabel, alphas: Sequence[float], axes: Sequence[Axis], cfg: ToleranceConfig
) -> list[VerificationReport]:
    """Resolvent and Cayley polynomial forms against the LU oracle, plus unitarity."""
    d = j.dim
    reports = []
    for alpha in alphas:
        cs = coeffs.resolvent_coefficients(j, alpha)
        b, a = cs.resolvent_values, cs.cayley_values
        link = max([abs(a[0] - (2 * b[0] - 1))] + [abs(x - 2 * y) for x, y in zip(a[1:], b[1:])])
        reports.append(VerificationReport("cayley_linkage", {"two_j": j.two_j, "alpha": alpha}, link, 0.0))
        for n in axes:
            params = {"two_j": j.two_j, "alpha": alpha, "axis": n.as_tuple()}
            oracle = oracle_resolvent(j, alpha, n)
            kappa = max_abs(oracle)
            poly = coeffs.resolvent_polynomial(j, alpha, n)
            reports.append(
                VerificationReport(
                    "resolvent_identity", params, max_abs(poly - oracle), cfg.rel_matrix_tol * kappa
                )
            )
            u = coeffs.cayley_polynomial(j, alpha, n)
            c_oracle = oracle_cayley(j, alpha, n)
            reports.append(
                VerificationReport(
                    "cayley_identity", params, max_abs(u - c_oracle), cfg.rel_matrix_tol * max_abs(c_oracle)
                )
            )
            reports.append(
                VerificationReport("unitarity_cayley", params, unitarity_residual(u), cfg.unitarity_tol * d)
            )
    return reports


def cfz_reports(
    j: SpinLabel, thetas: Sequence[float], axes: Sequence[Axis], cfg: ToleranceConfig
) -> list[VerificationReport]:
    d = j.dim
    reports = []
    for theta in thetas:
        for n in axes:
            params = {"two_j": j.two_j, "theta": theta, "axis": n.as_tuple()}
            u = coeffs.cfz_polynomial(j, theta, n)
            oracle = oracle_expm(j, theta, n)
            reports.append(
                VerificationReport("cfz_identity", params, max_abs(u - oracle), cfg.rel_matrix_tol * d)
            )
            reports.append(
                VerificationReport("unitarity_cfz", params, unitarity_residual(u), cfg.unitarity_tol * d)
            )
    return reports


def determinant_reports(j: SpinLabel, samples: int, seed: int) -> list[VerificationReport]:
    det = coeffs.det_polynomial(j)
    nonpositive = sum(1 for c in det.even_coeffs if not c > 0)
    reports = [
        VerificationReport("det_positive_coeffs", {"two_j": j.two_j}, float(nonpositive), 0.0),
    ]
    if det.even_coeffs[0] != 1:
        reports.append(VerificationReport("det_unit_constant", {"two_j": j.two_j}, 1.0, 0.0))
    rng = np.random.default_rng([seed, j.two_j])
    alphas = rng.standard_cauchy(samples)
    shortfall = max((max(0.0, 1.0 - det.evaluate(float(a))) for a in alphas), default=0.0)
    reports.append(
        VerificationReport("det_at_least_one", {"two_j": j.two_j, "samples": samples}, shortfall, 0.0)
    )
    if j.is_integer:
        jj = j.two_j // 2
        e = elementary_symmetric([p * p for p in range(1, jj + 1)])
        want = [4**m * e[m] for m in range(jj + 1)]
        mismatches = sum(1 for got, w in zip(det.even_coeffs, want) if got != w)
        mismatches += abs(len(det.even_coeffs) - len(want))
        reports.append(VerificationReport("central_factorial", {"two_j": j.two_j}, float(mismatches), 0.0))
    return reports


def general_theorem_reports(j: SpinLabel, alphas: Sequence[float], axis: Axis) -> list[VerificationReport]:
    m = 2 * axis_contraction(j, axis)
    reports = []
    for alpha in alphas:
        general, _ = coeffs.general_resolvent_polynomial(m, alpha)
        spin = coeffs.resolvent_coefficients(j, alpha).resolvent_values
        residual = max(abs(g - s) / max(1.0, abs(s)) for g, s in zip(general, spin))
        reports.append(
            VerificationReport(
                "general_theorem",
                {"two_j": j.two_j, "alpha": alpha, "axis": axis.as_tuple()},
                residual,
                GENERAL_THEOREM_TOL,
            )
        )
    return reports


def run_identity_suite(
    j: SpinLabel, cfg: ToleranceConfig | None = None, sweep: SweepGrid | None = None
) -> list[VerificationReport]:
    """Every identity check for one spin over ``sweep``, sorted deterministically.

    Failures, including quadrature that does not converge, become failing
    reports rather than exceptions.
    """
    cfg = cfg or ToleranceConfig()
    sweep = sweep or SweepGrid()
    axes = [as_axis(n) for n in sweep.axes]
    reports = spin_algebra_reports(j, axes)
    reports += resolvent_reports(j, sweep.alphas, axes, cfg)
    reports += cfz_reports(j, sweep.thetas, axes, cfg)
    reports += determinant_reports(j, sweep.det_samples, sweep.seed)
    if j.two_j <= GENERAL_THEOREM_MAX_TWO_J:
        reports += general_theorem_reports(j, sweep.alphas, axes[0])
    if j.two_j <= HILLE_YOSIDA_MAX_TWO_J:
        for k in range(j.dim):
            for t in sweep.hille_yosida_ts:
                try:
                    reports.append(hille_yosida_check(j, k, t, cfg))
                except QuadratureNotConverged:
                    reports.append(
                        VerificationReport(
                            "hille_yosida", {"two_j": j.two_j, "k": k, "t": t}, math.inf, cfg.quad_tol
                        )
                    )
    return sorted(reports, key=VerificationReport.sort_key)
