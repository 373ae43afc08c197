"""Exception types raised across the package."""


class ZeroAxis(ValueError):
    """Rotation axis too short to normalize."""


class IndexOutOfRange(IndexError):
    """Polynomial order k outside 0..2j."""


class HalfIntegerSpin(ValueError):
    """Operation defined for integer spin only."""


class SingularResolvent(ArithmeticError):
    """det(1 - itM) numerically zero; the resolvent does not exist."""


class QuadratureNotConverged(ArithmeticError):
    """Adaptive quadrature missed its tolerance within the step budget."""
