class QpError(Exception):
    """Base class for quadratic program failures."""


class InfeasibleEqualityError(QpError):
    """Raised when no point satisfies the equality constraints and the sign constraints together."""


class NotPSDError(QpError):
    """Raised when the quadratic coefficient matrix is not symmetric positive semidefinite."""


class MaxIterationsError(QpError):
    """Raised when the active-set iteration does not terminate within the iteration limit."""
