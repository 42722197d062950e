"""Independent solutions u, v of Lf = 0 and their Wronskian.

u(0)=0, u(1)=1 and v(0)=1, v(1)=0. Both solve the stochastic integral equation

    w(x) = r(x) - int_0^1 K(x, y) w(y) dB(y),   r = x (for u) or 1 - x (for v),

where K is the Dirichlet Green function of -d^2/dx^2. Two routes are provided:

* ``solve_direct`` discretises that equation with left-point dB sums;
* ``solve_fredholm`` integrates the dB terms by parts and solves an ordinary
  second-kind Fredholm equation for h = w', no stochastic integral involved.

They share no code beyond the grid, so their agreement checks both.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from greenlab.brownian import BrownianPath, increments
from greenlab.errors import DegeneratePathError, DependentSolutionsError, DomainError, ShapeError
from greenlab.grid import Grid, GridFunction, cumulative_integral

PIVOT_TOL = 1e-13
RCOND_TOL = 1e-8

# boundary data: (w(0), w(1)); r(x) = w(0) + (w(1) - w(0)) x
BOUNDARY = {"u": (0.0, 1.0), "v": (1.0, 0.0)}


@dataclass(frozen=True, eq=False)
class HomogeneousSolution:
    which: str
    values: GridFunction
    derivative_values: GridFunction
    method: str
    rcond: float = field(default=float("nan"), compare=False)

    @property
    def grid(self) -> Grid:
        return self.values.grid


@dataclass(frozen=True, eq=False)
class DirectSystem:
    matrix: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class FredholmSystem:
    """h = rhs + (kernel * weights) h, with h = w'."""

    kernel: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def matrix(self):
        return np.eye(len(self.rhs)) - self.kernel * self.weights[None, :]


def _check_which(which):
    if which not in BOUNDARY:
        raise ValueError(f"which must be 'u' or 'v', got {which!r}")
    return BOUNDARY[which]


def kernel_K(x, y):
    """K(x, y) = min(x, y) (1 - max(x, y)); accepts scalars or broadcastable arrays."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any((x < 0) | (x > 1) | (y < 0) | (y > 1)) or np.any(np.isnan(x) | np.isnan(y)):
        raise DomainError("kernel_K arguments must lie in [0, 1]")
    k = np.minimum(x, y) * (1.0 - np.maximum(x, y))
    return float(k) if k.ndim == 0 else k


def kernel_matrix(grid: Grid) -> np.ndarray:
    x = grid.nodes
    return kernel_K(x[:, None], x[None, :])


def rhs_values(grid: Grid, which: str) -> np.ndarray:
    w0, w1 = _check_which(which)
    return w0 + (w1 - w0) * np.asarray(grid.nodes)


def direct_system(path: BrownianPath, which: str) -> DirectSystem:
    grid = path.grid
    dB = np.append(increments(path), 0.0)  # column n carries no increment
    A = kernel_matrix(grid) * dB[None, :]
    A[np.diag_indices_from(A)] += 1.0
    return DirectSystem(matrix=A, rhs=rhs_values(grid, which))


def _factor(matrix, what):
    with warnings.catch_warnings():
        # exact zero pivots are reported below as DegeneratePathError
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(matrix, check_finite=True)
    pivots = np.abs(np.diag(lu))
    i = int(np.argmin(pivots))
    if pivots[i] < PIVOT_TOL:
        raise DegeneratePathError(
            f"{what}: pivot {pivots[i]:.3e} at row {i} below {PIVOT_TOL:g}", pivot=float(pivots[i])
        )
    anorm = np.linalg.norm(matrix, 1)
    rcond, info = lapack.dgecon(lu, anorm, norm="1")
    if info != 0 or rcond < RCOND_TOL:
        raise DegeneratePathError(
            f"{what}: condition estimate {1 / max(rcond, 1e-300):.3e} exceeds {1 / RCOND_TOL:g}",
            rcond=float(rcond),
        )
    return (lu, piv), float(rcond)


def solve_direct(path: BrownianPath, which: str) -> HomogeneousSolution:
    system = direct_system(path, which)
    factors, rcond = _factor(system.matrix, f"direct system for {which}")
    w = sla.lu_solve(factors, system.rhs)
    values = GridFunction(path.grid, w)
    return HomogeneousSolution(
        which=which,
        values=values,
        derivative_values=derivative_from_integral(path, values, which),
        method="direct",
        rcond=rcond,
    )


def partial_trapezoid(grid: Grid) -> np.ndarray:
    """Row i holds the trapezoid weights of int_0^{x_i}."""
    n, step = grid.n, grid.step
    W = np.tril(np.full((n + 1, n + 1), step), k=-1)
    W[1:, 0] = step / 2
    idx = np.arange(1, n + 1)
    W[idx, idx] = step / 2
    return W


def fredholm_system(path: BrownianPath, which: str) -> FredholmSystem:
    """Fredholm equation for h = w'.

    Integrating the dB terms by parts and differentiating once gives

        h(x) = r' + w(0) (B(x) - int B) + g(x) - int_0^1 g,
        g(x) = B(x) int_0^x h + int_x^1 B h,

    once w(x) = w(0) + int_0^x h is substituted. The subtracted mean of g is the
    constant that fixes w(1); because it is assembled from the same trapezoid
    weights used to integrate h back, w(1) is reproduced to rounding.
    """
    grid = path.grid
    w0, w1 = _check_which(which)
    B = np.asarray(path.values)
    wts = np.asarray(grid.weights)
    head = partial_trapezoid(grid)
    tail = wts[None, :] - head
    N = B[:, None] * head + tail * B[None, :]
    M = N - (wts @ N)[None, :]
    rhs = (w1 - w0) + w0 * (B - wts @ B)
    return FredholmSystem(kernel=M / wts[None, :], rhs=rhs, weights=wts)


def solve_fredholm(path: BrownianPath, which: str) -> HomogeneousSolution:
    w0, _ = _check_which(which)
    system = fredholm_system(path, which)
    factors, rcond = _factor(system.matrix, f"Fredholm system for {which}")
    h = sla.lu_solve(factors, system.rhs)
    deriv = GridFunction(path.grid, h)
    values = GridFunction(path.grid, w0 + cumulative_integral(deriv).values)
    return HomogeneousSolution(
        which=which, values=values, derivative_values=deriv, method="fredholm", rcond=rcond
    )


def solve(path: BrownianPath, which: str, method: str = "direct") -> HomogeneousSolution:
    if method == "direct":
        return solve_direct(path, which)
    if method == "fredholm":
        return solve_fredholm(path, which)
    raise ValueError(f"unknown method {method!r}")


def derivative_from_integral(path: BrownianPath, sol_values: GridFunction, which: str) -> GridFunction:
    """w'(x) = r' + int_0^1 y w(y) dB(y) - int_x^1 w(y) dB(y), left-point sums.

    On a direct solution this equals the backward difference (w_i - w_{i-1})/h,
    which is what makes the discrete Wronskian constant.
    """
    if sol_values.grid != path.grid:
        raise ShapeError("solution and path live on different grids")
    w0, w1 = _check_which(which)
    w = np.asarray(sol_values.values)
    wdB = w[:-1] * increments(path)
    total = float(np.dot(np.asarray(path.grid.nodes[:-1]), wdB))
    tail = np.append(np.cumsum(wdB[::-1])[::-1], 0.0)
    return GridFunction(path.grid, (w1 - w0) + total - tail)


def wronskian_values(u_sol: HomogeneousSolution, v_sol: HomogeneousSolution) -> np.ndarray:
    u, du = u_sol.values.values, u_sol.derivative_values.values
    v, dv = v_sol.values.values, v_sol.derivative_values.values
    return du * v - u * dv


def wronskian(u_sol: HomogeneousSolution, v_sol: HomogeneousSolution) -> tuple[float, float]:
    """Return (alpha, relative spread) of u'v - uv' over the nodes."""
    if u_sol.grid != v_sol.grid:
        raise ShapeError("u and v live on different grids")
    if u_sol.which != "u" or v_sol.which != "v":
        raise ValueError("expected (u, v) in that order")
    W = wronskian_values(u_sol, v_sol)
    alpha = float(np.mean(W))
    if abs(alpha) < 1e-10:
        raise DependentSolutionsError(f"Wronskian {alpha:.3e} ~ 0: u and v are dependent", alpha=alpha)
    return alpha, float((W.max() - W.min()) / abs(alpha))
