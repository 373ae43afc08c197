"""Rotation operators for spin j as polynomials in 2i n.J, in exponential and Cayley form."""

from .coeffs import (
    CayleyCoefficientSet,
    CfzCoefficientSet,
    CharPolyCoeffs,
    DetPolynomial,
    cayley_polynomial,
    central_factorial_magnitudes,
    cfz_coefficient,
    cfz_coefficients,
    cfz_polynomial,
    det_one_minus_itm,
    det_polynomial,
    epsilon,
    general_resolvent_polynomial,
    resolvent_coefficients,
    resolvent_polynomial,
)
from .errors import (
    HalfIntegerSpin,
    IndexOutOfRange,
    QuadratureNotConverged,
    SingularResolvent,
    ZeroAxis,
)
from .series import RationalSeries
from .spin_core import Axis, SpinLabel, axis_contraction, build_j3, build_ladder, generators
from .verify import (
    ToleranceConfig,
    VerificationReport,
    hille_yosida_check,
    oracle_expm,
    oracle_resolvent,
    run_identity_suite,
)

__version__ = "0.1.0"
