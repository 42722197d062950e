"""Weak action of L, its pathwise bilinear form, and the identities built on them.

Two expressions for <Lf, g> on H_1:

    weak_apply:     int f'g' dx + int f g dB          (left-point dB sum)
    bilinear_form:  int f'g' dx - int (f'g + f g') B dx   (ordinary integrals)

They agree in the continuum by Ito's formula; the residual checks below go
through the second, which has no stochastic integral.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from greenlab.brownian import BrownianPath, increments
from greenlab.errors import DomainError, ShapeError
from greenlab.green import GreenKernel, apply_T
from greenlab.grid import Grid, GridFunction, derivative, inner_product, norm
from greenlab.homogeneous import HomogeneousSolution


@dataclass(frozen=True)
class TestBasis:
    __test__ = False  # not a pytest class

    functions: tuple

    def __post_init__(self):
        for f in self.functions:
            if f.values[0] != 0.0 or f.values[-1] != 0.0:
                raise DomainError("test functions must vanish exactly at both ends")

    def __iter__(self):
        return iter(self.functions)

    def __len__(self):
        return len(self.functions)


def sine_basis(grid: Grid, m: int = 8) -> TestBasis:
    return TestBasis(
        tuple(grid.sample(lambda x, j=j: np.sin(j * np.pi * x), h_element=True) for j in range(1, m + 1))
    )


@dataclass(frozen=True)
class ResidualReport:
    residuals: np.ndarray = field(repr=False)

    @property
    def max_residual(self):
        return float(np.max(self.residuals)) if self.residuals.size else 0.0

    @property
    def mean_residual(self):
        return float(np.mean(self.residuals)) if self.residuals.size else 0.0

    def as_dict(self):
        return {"max_residual": self.max_residual, "mean_residual": self.mean_residual}


def _check(path, *fs, tol=1e-12):
    for f in fs:
        if f.grid != path.grid:
            raise ShapeError(f"grid mismatch: n={f.grid.n} vs path n={path.grid.n}")
        if not f.vanishes_at_ends(tol * max(1.0, f.sup())):
            raise DomainError("argument must vanish at x=0 and x=1")


def weak_apply(path: BrownianPath, f: GridFunction, g: GridFunction) -> float:
    _check(path, f, g)
    return _weak_apply(path, f, g)


def _weak_apply(path, f, g):
    kinetic = inner_product(derivative(f), derivative(g))
    fg = f.values * g.values
    return kinetic + float(np.dot(fg[:-1], increments(path)))


def bilinear_form(path: BrownianPath, f: GridFunction, g: GridFunction) -> float:
    _check(path, f, g)
    return _bilinear(path, f, g)


def _bilinear(path, f, g):
    df, dg = derivative(f), derivative(g)
    cross = df.values * g.values + f.values * dg.values
    B = np.asarray(path.values)
    return inner_product(df, dg) - float(np.dot(path.grid.weights, cross * B))


def verify_right_inverse(path: BrownianPath, gk: GreenKernel, basis: TestBasis) -> ResidualReport:
    """|E(Tf, h) - <f, h>| over all (f, h) in basis x basis."""
    res = np.empty((len(basis), len(basis)))
    for i, f in enumerate(basis):
        Tf = apply_T(gk, f)
        for j, h in enumerate(basis):
            res[i, j] = abs(bilinear_form(path, Tf, h) - inner_product(f, h))
    return ResidualReport(res)


def tilde_domain_check(path: BrownianPath, gk: GreenKernel, g: GridFunction, basis: TestBasis) -> ResidualReport:
    """With f = Tg, check E(f, h) = <g, h> on the basis, i.e. the form operator maps f to g."""
    _check(path, g)
    f = apply_T(gk, g)
    return ResidualReport(np.array([abs(bilinear_form(path, f, h) - inner_product(g, h)) for h in basis]))


def homogeneous_residual(path: BrownianPath, sol: HomogeneousSolution, basis: TestBasis) -> ResidualReport:
    """|<Lw, h>| for a solution w of Lw = 0; w need not vanish at the ends, h does."""
    _check(path, *basis)
    if sol.grid != path.grid:
        raise ShapeError("solution and path live on different grids")
    # the B-boundary term w h B vanishes because h does
    return ResidualReport(np.array([abs(_bilinear(path, sol.values, h)) for h in basis]))


def eigen_residual(path: BrownianPath, e: GridFunction, lam: float, basis: TestBasis) -> float:
    """max_h |<Le, h> - lambda <e, h>| with <Le, h> from the dB form."""
    _check(path, e, *basis)
    return max(abs(_weak_apply(path, e, h) - lam * inner_product(e, h)) for h in basis)


def scale(f: GridFunction, g: GridFunction) -> float:
    return norm(f) * norm(g)
