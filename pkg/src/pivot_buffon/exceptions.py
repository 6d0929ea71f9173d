"""Exception types raised by pivot_buffon."""


class PivotBuffonError(Exception):
    """Base class for all package errors."""


class DomainError(PivotBuffonError, ValueError):
    """An elliptic modulus outside [0, 1]."""


class DegenerateNeedleError(PivotBuffonError, ValueError):
    """Both segment lengths are zero."""


class ConstraintError(PivotBuffonError, ValueError):
    """The needle is longer than the line spacing (a + b > d)."""


class InternalConsistencyError(PivotBuffonError, RuntimeError):
    """A computed probability left [0, 1] by more than rounding noise."""


class QuadratureError(PivotBuffonError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class CategoryCollapseError(PivotBuffonError, ValueError):
    """A goodness-of-fit category has zero expected count."""
