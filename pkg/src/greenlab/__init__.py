"""Green kernel and spectrum of the Schrodinger operator -d^2/dx^2 + B'(x) on [0,1].

B is a Brownian path; Dirichlet conditions at both ends.
"""

from greenlab.errors import (
    CutoffError,
    DegeneratePathError,
    DependentSolutionsError,
    DomainError,
    GreenLabError,
    GridError,
    PathError,
    ResolutionError,
    ShapeError,
    SolverError,
)
from greenlab.grid import Grid, GridFunction, make_grid

__version__ = "0.1.0"

__all__ = [
    "CutoffError",
    "DegeneratePathError",
    "DependentSolutionsError",
    "DomainError",
    "GreenLabError",
    "Grid",
    "GridError",
    "GridFunction",
    "PathError",
    "ResolutionError",
    "ShapeError",
    "SolverError",
    "make_grid",
    "__version__",
]
