"""Exception hierarchy shared by all xyent modules."""


class XYEntError(Exception):
    """Base class for every error raised by xyent."""


class DomainError(XYEntError, ValueError):
    """Input outside the domain of an operation."""


class CriticalPointError(DomainError):
    """The point lies on a critical line, where k = 1 or k is undefined."""


class NearCriticalError(DomainError):
    """The point is too close to a critical line for the requested route."""


class NumericalFailure(XYEntError, ArithmeticError):
    """An iterative scheme failed to converge or a consistency check failed."""
