"""
Error Types Module

Exception hierarchy shared by every module. Library code raises these; the
command line maps them to exit code 3.
"""

from typing import Optional


class AccretiveError(Exception):
    """Base class for all errors raised by the toolkit."""


class InputError(AccretiveError):
    """Malformed input: non-square, non-finite, wrong dimension or bad file."""


class NotPSDError(AccretiveError):
    """Matrix expected to be positive semidefinite has a negative eigenvalue."""

    def __init__(self, message: str, lambda_min: Optional[float] = None):
        super().__init__(message)
        self.lambda_min = lambda_min


class SingularMatrixError(AccretiveError):
    """Matrix is singular or too ill-conditioned to invert safely."""

    def __init__(self, message: str, condition: Optional[float] = None):
        super().__init__(message)
        self.condition = condition


class EigenConvergenceError(AccretiveError):
    """Jacobi iteration did not reach the off-diagonal target."""

    def __init__(self, message: str, residual: float, sweeps: int):
        super().__init__(message)
        self.residual = residual
        self.sweeps = sweeps


class InvalidWindowError(AccretiveError):
    """Window does not satisfy 0 < m < M."""


class DegenerateWindowError(AccretiveError):
    """Optimal window collapses to a point (the operator is a scalar multiple of I)."""


class GeneratorError(AccretiveError):
    """Generator preconditions are violated."""


class UnknownCaseError(AccretiveError):
    """Case id is not in the catalog registry."""
