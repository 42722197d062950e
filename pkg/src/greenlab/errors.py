"""Exception hierarchy. Numerical failures subclass NumericalError."""


class GreenLabError(Exception):
    pass


class GridError(GreenLabError, ValueError):
    """Invalid grid resolution."""


class ShapeError(GreenLabError, ValueError):
    """Operands live on different grids or have the wrong length."""


class PathError(GreenLabError, ValueError):
    """A Brownian path violates B(0) = 0 or is malformed."""


class ResolutionError(GreenLabError, ValueError):
    """Coarse resolution does not divide the fine one."""


class DomainError(GreenLabError, ValueError):
    """Argument outside [0, 1], or a function that should vanish at the ends does not."""


class NumericalError(GreenLabError, ArithmeticError):
    pass


class DegeneratePathError(NumericalError):
    def __init__(self, message, pivot=None, rcond=None):
        super().__init__(message)
        self.pivot = pivot
        self.rcond = rcond


class DependentSolutionsError(NumericalError):
    def __init__(self, message, alpha=None):
        super().__init__(message)
        self.alpha = alpha


class SolverError(NumericalError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CutoffError(NumericalError):
    """Requested eigenvalue lies below the magnitude cutoff."""
