"""Brownian paths on a grid, their piecewise-linear approximants, and oracle paths."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from greenlab.errors import PathError, ResolutionError
from greenlab.grid import Grid, GridFunction, make_grid, read_columns, write_columns


@dataclass(frozen=True, eq=False)
class BrownianPath:
    """Samples of B at the nodes of ``grid``.

    ``kind`` is one of ``"sampled"``, ``"piecewise"``, ``"deterministic"``;
    ``label`` records the provenance (seed, source and m, or oracle name).
    """

    grid: Grid
    values: np.ndarray = field(repr=False)
    kind: str = "deterministic"
    label: str = ""
    seed: int | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n + 1,):
            raise PathError(f"path needs {self.grid.n + 1} samples, got shape {values.shape}")
        if values[0] != 0.0:
            raise PathError(f"B(0) must be 0, got {values[0]!r}")
        if not np.all(np.isfinite(values)):
            raise PathError("path contains non-finite samples")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def as_function(self) -> GridFunction:
        return GridFunction(self.grid, self.values)

    def describe(self):
        return {"kind": self.kind, "label": self.label, "seed": self.seed, "n": self.grid.n}

    def to_csv(self, target=None):
        return write_columns(target, "x,B", [self.grid.nodes, self.values])


def rng_for(seed: int) -> np.random.Generator:
    # Philox is counter-based; SeedSequence hashing makes nearby seeds unrelated
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def derive_seed(master_seed: int, index: int) -> int:
    """Independent 64-bit seed for stream ``index`` of ``master_seed``."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_brownian(grid: Grid, seed: int) -> BrownianPath:
    dB = rng_for(seed).standard_normal(grid.n) * np.sqrt(grid.step)
    values = np.concatenate(([0.0], np.cumsum(dB)))
    return BrownianPath(grid, values, kind="sampled", label=f"seed={int(seed)}", seed=int(seed))


def piecewise_linear(source: BrownianPath, m: int) -> BrownianPath:
    """Interpolate ``source`` linearly between the nodes j/m, back on the full grid.

    This is the approximant B_m(x) = m[((j+1)/m - x) B(j/m) + (x - j/m) B((j+1)/m)]
    on [j/m, (j+1)/m].
    """
    n = source.grid.n
    if m < 1 or n % m:
        raise ResolutionError(f"m={m} does not divide grid resolution n={n}")
    stride = n // m
    coarse_x = source.grid.nodes[::stride]
    coarse_b = source.values[::stride]
    values = np.interp(source.grid.nodes, coarse_x, coarse_b)
    # keep the coarse nodes bit-exact
    values[::stride] = coarse_b
    return BrownianPath(
        source.grid,
        values,
        kind="piecewise",
        label=f"piecewise({source.label}, m={m})",
        seed=source.seed,
    )


def restrict(path: BrownianPath, n: int) -> BrownianPath:
    """Subsample ``path`` onto the coarser grid with ``n`` subintervals."""
    fine = path.grid.n
    if n < 2 or fine % n:
        raise ResolutionError(f"n={n} does not divide grid resolution n={fine}")
    return BrownianPath(
        make_grid(n), path.values[:: fine // n], kind=path.kind, label=path.label, seed=path.seed
    )


def deterministic_path(grid: Grid, spec: str = "zero", *, c: float = 0.0, values=None) -> BrownianPath:
    """Oracle paths: ``"zero"`` (B = 0), ``"linear"`` (B = c x), ``"from_samples"``."""
    if spec == "zero":
        return BrownianPath(grid, np.zeros(grid.n + 1), label="zero")
    if spec == "linear":
        return BrownianPath(grid, c * np.asarray(grid.nodes), label=f"linear({c!r})")
    if spec == "from_samples":
        if values is None:
            raise PathError("from_samples needs values")
        return BrownianPath(grid, values, label="from_samples")
    raise PathError(f"unknown deterministic path spec {spec!r}")


def zero_path(grid: Grid) -> BrownianPath:
    return deterministic_path(grid, "zero")


def linear_path(grid: Grid, c: float) -> BrownianPath:
    return deterministic_path(grid, "linear", c=c)


def increments(path: BrownianPath) -> np.ndarray:
    return np.diff(path.values)


def read_path(source) -> BrownianPath:
    """Load a path written by :meth:`BrownianPath.to_csv`."""
    header, data = read_columns(source)
    if [h.strip() for h in header] != ["x", "B"] or data.ndim != 2 or data.shape[1] != 2:
        raise PathError(f"{source}: expected header 'x,B' and two columns")
    grid = make_grid(len(data) - 1)
    if np.max(np.abs(data[:, 0] - grid.nodes)) > 1e-12:
        raise PathError(f"{source}: nodes are not the uniform grid i/n")
    return BrownianPath(grid, data[:, 1], label=f"file:{source}")
