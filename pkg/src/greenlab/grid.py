"""Uniform grids on [0, 1], grid-sampled functions, trapezoid quadrature."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import cumulative_trapezoid

from greenlab.errors import DomainError, GridError, ShapeError


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform partition of [0, 1] into ``n`` subintervals with trapezoid weights."""

    n: int
    nodes: np.ndarray = field(repr=False)
    step: float
    weights: np.ndarray = field(repr=False)

    def __eq__(self, other):
        # a uniform grid on [0, 1] is determined by n
        return isinstance(other, Grid) and other.n == self.n

    def __hash__(self):
        return hash(("Grid", self.n))

    def __len__(self):
        return self.n + 1

    def function(self, values, *, h_element=False) -> GridFunction:
        return GridFunction(self, values, h_element=h_element)

    def sample(self, fn, *, h_element=False) -> GridFunction:
        """Evaluate a vectorised callable at the nodes.

        With ``h_element=True`` the endpoint values are set to exactly zero,
        which absorbs rounding such as ``sin(pi * 1.0) != 0``.
        """
        values = np.asarray(fn(self.nodes), dtype=float) * np.ones(self.n + 1)
        if h_element:
            if abs(values[0]) > 1e-12 or abs(values[-1]) > 1e-12:
                raise DomainError("function does not vanish at the endpoints")
            values[0] = values[-1] = 0.0
        return GridFunction(self, values, h_element=h_element)


def make_grid(n: int) -> Grid:
    if int(n) != n or n < 2:
        raise GridError(f"grid needs n >= 2 subintervals, got {n!r}")
    n = int(n)
    step = 1.0 / n
    weights = np.full(n + 1, step)
    weights[0] = weights[-1] = step / 2
    return Grid(n=n, nodes=_frozen(np.arange(n + 1) / n), step=step, weights=_frozen(weights))


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: Grid
    values: np.ndarray = field(repr=False)
    h_element: bool = False

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != (self.grid.n + 1,):
            raise ShapeError(f"expected {self.grid.n + 1} values, got shape {values.shape}")
        if self.h_element and (values[0] != 0.0 or values[-1] != 0.0):
            raise DomainError("H-element must vanish exactly at x=0 and x=1")
        object.__setattr__(self, "values", values)

    @property
    def x(self):
        return self.grid.nodes

    def __call__(self, x):
        """Piecewise-linear interpolation between nodes."""
        return np.interp(x, self.grid.nodes, self.values)

    def __add__(self, other):
        _check_same(self, other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other):
        _check_same(self, other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, c):
        if isinstance(c, GridFunction):
            _check_same(self, c)
            return GridFunction(self.grid, self.values * c.values)
        return GridFunction(self.grid, self.values * float(c), h_element=self.h_element)

    __rmul__ = __mul__

    def vanishes_at_ends(self, tol=0.0):
        return abs(self.values[0]) <= tol and abs(self.values[-1]) <= tol

    def sup(self):
        return float(np.max(np.abs(self.values)))

    def to_csv(self, target=None, header="x,value"):
        return write_columns(target, header, [self.grid.nodes, self.values])


def _check_same(f, g):
    if f.grid != g.grid:
        raise ShapeError(f"grid mismatch: n={f.grid.n} vs n={g.grid.n}")


def integrate(f: GridFunction) -> float:
    return float(np.dot(f.grid.weights, f.values))


def inner_product(f: GridFunction, g: GridFunction) -> float:
    _check_same(f, g)
    return float(np.dot(f.grid.weights, f.values * g.values))


def norm(f: GridFunction) -> float:
    return inner_product(f, f) ** 0.5


def derivative(f: GridFunction) -> GridFunction:
    """Central differences inside, second-order one-sided stencils at the ends."""
    return GridFunction(f.grid, np.gradient(f.values, f.grid.step, edge_order=2))


def cumulative_integral(f: GridFunction) -> GridFunction:
    """Running trapezoid integral from 0; the first value is 0."""
    return GridFunction(f.grid, cumulative_trapezoid(f.values, dx=f.grid.step, initial=0.0))


def fmt(v) -> str:
    return format(float(v), ".17g")


def write_columns(target, header, columns):
    """Write columns as CSV with 17 significant digits.

    ``target`` may be a path, an open text stream, or None (returns the text).
    """
    buf = io.StringIO()
    buf.write(header + "\n")
    for row in zip(*columns):
        buf.write(",".join(fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    if target is None:
        return text
    if isinstance(target, (str, Path)):
        Path(target).write_text(text)
    else:
        target.write(text)
    return None


def read_columns(source):
    """Read a headered numeric CSV into (header, 2d array)."""
    with open(source, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{source}: empty CSV")
    header, body = rows[0], [r for r in rows[1:] if r]
    return header, np.array([[float(v) for v in r] for r in body], dtype=float)
