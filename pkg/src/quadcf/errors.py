"""Exception types shared across the package."""


class QuadCFError(Exception):
    """Base class for all package errors."""


class CertificationFailure(QuadCFError):
    """A ball could not be separated from a decision boundary at the precision ceiling."""


class DivisionByZero(QuadCFError, ZeroDivisionError):
    pass


class ZeroDenominator(QuadCFError, ZeroDivisionError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"convergent denominator q_{index} vanishes")


class ZeroDerivative(QuadCFError, ZeroDivisionError):
    pass


class ZeroTerm(QuadCFError, ZeroDivisionError):
    pass


class CapExceeded(QuadCFError, ValueError):
    pass


class DomainError(QuadCFError, ValueError):
    pass


class NotAdmissible(QuadCFError, ValueError):
    """Parameters fall inside an exclusion set."""
