"""Exit criteria, one test per criterion at its stated tolerance."""

import math
import time

import numpy as np
import pytest

from cayleyspin import coeffs, verify
from cayleyspin.spin_core import Axis, SpinLabel, axis_contraction

SWEEP_MAX_TWO_J = 25
SWEEP_AXES = verify.random_axes(20, seed=2024)
SWEEP_ALPHAS = verify.DEFAULT_ALPHAS
SWEEP_THETAS = verify.DEFAULT_THETAS
CFG = verify.ToleranceConfig()
HALF = SpinLabel(1)
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _worst(reports, name):
    rs = [r for r in reports if r.identity_name == name]
    assert rs, f"no {name} reports"
    failed = [r for r in rs if not r.passed]
    ratio = max(r.residual / r.tolerance if r.tolerance else (0.0 if r.residual == 0 else math.inf) for r in rs)
    return rs, failed, ratio


@pytest.fixture(scope="module")
def resolvent_sweep():
    start = time.perf_counter()
    reports = []
    for two_j in range(SWEEP_MAX_TWO_J + 1):
        reports += verify.resolvent_reports(SpinLabel(two_j), SWEEP_ALPHAS, SWEEP_AXES, CFG)
    return reports, time.perf_counter() - start


@pytest.fixture(scope="module")
def cfz_sweep():
    start = time.perf_counter()
    reports = []
    for two_j in range(SWEEP_MAX_TWO_J + 1):
        reports += verify.cfz_reports(SpinLabel(two_j), SWEEP_THETAS, SWEEP_AXES, CFG)
    return reports, time.perf_counter() - start


def test_criterion_1_spin_half_golden_forms(acceptance_log):
    start = time.perf_counter()
    worst = 0.0
    axes = [Axis.z()] + verify.random_axes(3, seed=11)
    for theta in np.linspace(0.0, 4 * math.pi, 256, endpoint=False):
        for n in axes:
            n_sigma = sum(c * p for c, p in zip(n.as_tuple(), PAULI))
            want = math.cos(theta / 2) * np.eye(2) + 1j * math.sin(theta / 2) * n_sigma
            worst = max(worst, np.abs(coeffs.cfz_polynomial(HALF, theta, n) - want).max())
    sigma3 = PAULI[2]
    for alpha in np.linspace(-10.0, 10.0, 401):
        t = 2 * alpha
        denom = 1 + t * t / 4
        b = coeffs.resolvent_coefficients(HALF, alpha).resolvent_values
        worst = max(worst, abs(b[0] - 1 / denom), abs(b[1] - (t / 2) / denom))
        worst = max(worst, abs(float(coeffs.det_polynomial(HALF).evaluate(alpha)) - denom) / denom)
        matrix = coeffs.resolvent_polynomial(HALF, alpha, Axis.z())
        worst = max(worst, np.abs(matrix - (np.eye(2) + 0.5j * t * sigma3) / denom).max())
    elapsed = time.perf_counter() - start
    acceptance_log(
        1,
        "spin-1/2 golden forms",
        worst <= 1e-12 and elapsed < 1.0,
        f"max residual {worst:.2e} <= 1e-12, {elapsed:.2f}s < 1s",
    )


def test_criterion_2_resolvent_identity(acceptance_log, resolvent_sweep):
    reports, elapsed = resolvent_sweep
    rs, failed, ratio = _worst(reports, "resolvent_identity")
    expected = (SWEEP_MAX_TWO_J + 1) * len(SWEEP_ALPHAS) * len(SWEEP_AXES)
    acceptance_log(
        2,
        "resolvent identity vs LU oracle",
        not failed and len(rs) == expected and elapsed < 120,
        f"{len(rs)} cases, {len(failed)} failed, worst residual/(1e-9*kappa) {ratio:.2e}, {elapsed:.1f}s < 120s",
    )


def test_criterion_3_cfz_identity(acceptance_log, cfz_sweep):
    reports, elapsed = cfz_sweep
    rs, failed, ratio = _worst(reports, "cfz_identity")
    expected = (SWEEP_MAX_TWO_J + 1) * len(SWEEP_THETAS) * len(SWEEP_AXES)
    acceptance_log(
        3,
        "CFZ identity vs eigendecomposition oracle",
        not failed and len(rs) == expected and elapsed < 120,
        f"{len(rs)} cases, {len(failed)} failed, worst residual/(1e-9*d) {ratio:.2e}, {elapsed:.1f}s < 120s",
    )


def test_criterion_4_central_factorial_exactness(acceptance_log):
    mismatches = 0
    for jj in range(13):
        det = coeffs.det_polynomial(SpinLabel(2 * jj)).even_coeffs
        e = verify.elementary_symmetric([p * p for p in range(1, jj + 1)])
        want = [4**m * e[m] for m in range(jj + 1)]
        mismatches += sum(1 for got, w in zip(det, want) if got != w) + abs(len(det) - len(want))
        mismatches += coeffs.central_factorial_magnitudes(SpinLabel(2 * jj)) != e
    acceptance_log(4, "det coefficients = 4^m e_m(1^2..j^2)", mismatches == 0, f"{mismatches} mismatches, j <= 12")


def test_criterion_5_no_real_pole(acceptance_log):
    failures = 0
    for two_j in range(41):
        det = coeffs.det_polynomial(SpinLabel(two_j))
        failures += sum(1 for c in det.even_coeffs if not c > 0)
        rng = np.random.default_rng(1000 + two_j)
        failures += sum(1 for a in rng.standard_cauchy(1000) if not det.evaluate(float(a)) >= 1.0)
    acceptance_log(5, "positive det coefficients, det >= 1 on reals", failures == 0, f"{failures} failures, two_j <= 40")


def test_criterion_6_hille_yosida(acceptance_log):
    start = time.perf_counter()
    worst, count, failed = 0.0, 0, 0
    for two_j in range(7):
        j = SpinLabel(two_j)
        for k in range(j.dim):
            for t in np.linspace(-1.0, 1.0, 9):
                try:
                    r = verify.hille_yosida_check(j, k, float(t), CFG)
                except verify.QuadratureNotConverged:
                    failed += 1
                    continue
                count += 1
                worst = max(worst, r.residual)
                failed += not r.passed
    elapsed = time.perf_counter() - start
    acceptance_log(
        6,
        "Laplace bridge between CFZ and resolvent coefficients",
        failed == 0 and worst <= 1e-6 and elapsed < 60,
        f"{count} integrals, worst residual {worst:.2e} <= 1e-6, {elapsed:.1f}s < 60s",
    )


def test_criterion_7_unitarity_and_linkage(acceptance_log, resolvent_sweep, cfz_sweep):
    _, cay_failed, cay_ratio = _worst(resolvent_sweep[0], "unitarity_cayley")
    _, cfz_failed, cfz_ratio = _worst(cfz_sweep[0], "unitarity_cfz")
    _, link_failed, _ = _worst(resolvent_sweep[0], "cayley_linkage")
    acceptance_log(
        7,
        "unitarity of both forms and exact C/B linkage",
        not (cay_failed or cfz_failed or link_failed),
        f"worst |UU^+ - I|/(1e-10*d): cayley {cay_ratio:.2e}, cfz {cfz_ratio:.2e}; linkage failures {len(link_failed)}",
    )


def test_criterion_8_general_theorem(acceptance_log):
    rng = np.random.default_rng(8)
    worst_matrix = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 17))
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        t = float(rng.uniform(-1, 1))
        _, mat = coeffs.general_resolvent_polynomial(m, t)
        want = np.linalg.inv(np.eye(n) - 1j * t * m)
        worst_matrix = max(worst_matrix, np.abs(mat - want).max() / np.abs(want).max())
    worst_coeff = 0.0
    for two_j in range(13):
        j = SpinLabel(two_j)
        for n in SWEEP_AXES[:3]:
            for alpha in SWEEP_ALPHAS:
                b, _ = coeffs.general_resolvent_polynomial(2 * axis_contraction(j, n), alpha)
                want = coeffs.resolvent_coefficients(j, alpha).resolvent_values
                worst_coeff = max(worst_coeff, max(abs(g - w) / max(1.0, abs(w)) for g, w in zip(b, want)))
    acceptance_log(
        8,
        "general N x N resolvent polynomial",
        worst_matrix <= 1e-9 and worst_coeff <= 1e-10,
        f"random matrices rel {worst_matrix:.2e} <= 1e-9; spin coefficients {worst_coeff:.2e} <= 1e-10",
    )


def test_criterion_9_large_j_trend(acceptance_log):
    alpha = 0.05
    spins = (5, 10, 20, 40)
    sequences = {}
    for k in (0, 1, 2):
        sequences[k] = [
            abs(coeffs.resolvent_coefficients(SpinLabel(2 * jj), alpha).resolvent_values[k] / alpha**k - 1)
            for jj in spins
        ]
    decreasing = {k: all(a > b for a, b in zip(s, s[1:])) for k, s in sequences.items()}
    detail = "; ".join(f"k={k}: " + ", ".join(f"{v:.3e}" for v in s) for k, s in sequences.items())
    acceptance_log(9, "|B_k/alpha^k - 1| strictly decreasing in j", all(decreasing.values()), detail)
