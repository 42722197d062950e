"""Green kernel G(x, y) = u(min(x, y)) v(max(x, y)) and the operator T = G / alpha."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from greenlab.errors import DependentSolutionsError, ShapeError
from greenlab.grid import GridFunction, write_columns
from greenlab.homogeneous import HomogeneousSolution


@dataclass(frozen=True, eq=False)
class NystromMatrix:
    """sqrt(W) (G / alpha) sqrt(W), W the trapezoid weights; exactly symmetric."""

    entries: np.ndarray = field(repr=False)
    sqrt_weights: np.ndarray = field(repr=False)

    @property
    def size(self):
        return self.entries.shape[0]

    def symmetry_defect(self):
        return float(np.max(np.abs(self.entries - self.entries.T)))


@dataclass(frozen=True, eq=False)
class GreenKernel:
    u_sol: HomogeneousSolution
    v_sol: HomogeneousSolution
    alpha: float

    @property
    def grid(self):
        return self.u_sol.grid

    @cached_property
    def lattice(self) -> np.ndarray:
        """G on the node lattice (without the 1/alpha factor)."""
        u = np.asarray(self.u_sol.values.values)
        v = np.asarray(self.v_sol.values.values)
        # upper triangle i <= j: u_i v_j; lower: v_i u_j, the same product on swap
        G = np.triu(np.outer(u, v))
        G += np.tril(np.outer(v, u), k=-1)
        G.setflags(write=False)
        return G

    def evaluate(self, x, y):
        """G(x, y) off the lattice, by linear interpolation of u and v."""
        lo, hi = np.minimum(x, y), np.maximum(x, y)
        return self.u_sol.values(lo) * self.v_sol.values(hi)

    def to_csv(self, target=None):
        x = self.grid.nodes
        X, Y = np.meshgrid(x, x, indexing="ij")
        return write_columns(target, "x,y,G", [X.ravel(), Y.ravel(), self.lattice.ravel()])


def build_green(u_sol: HomogeneousSolution, v_sol: HomogeneousSolution, alpha: float) -> GreenKernel:
    if u_sol.grid != v_sol.grid:
        raise ShapeError("u and v live on different grids")
    if u_sol.which != "u" or v_sol.which != "v":
        raise ValueError("expected (u, v) in that order")
    if not alpha or not np.isfinite(alpha):
        raise DependentSolutionsError(f"alpha={alpha!r}: u and v are dependent", alpha=alpha)
    return GreenKernel(u_sol, v_sol, float(alpha))


def apply_T(gk: GreenKernel, f: GridFunction) -> GridFunction:
    """[Tf](x) = (1/alpha) int_0^1 G(x, y) f(y) dy by trapezoid."""
    if f.grid != gk.grid:
        raise ShapeError(f"grid mismatch: n={f.grid.n} vs n={gk.grid.n}")
    out = gk.lattice @ (np.asarray(gk.grid.weights) * f.values) / gk.alpha
    # u(0) = v(1) = 0 kill both end rows; pin them against rounding in v(1)
    out[0] = out[-1] = 0.0
    return GridFunction(gk.grid, out, h_element=True)


def nystrom_matrix(gk: GreenKernel) -> NystromMatrix:
    s = np.sqrt(np.asarray(gk.grid.weights))
    M = s[:, None] * gk.lattice * s[None, :] / gk.alpha
    M = 0.5 * (M + M.T)
    return NystromMatrix(entries=M, sqrt_weights=s)
