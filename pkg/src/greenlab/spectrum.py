"""Spectrum of T from its Nystrom matrix, mapped to L through lambda = 1/beta."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from greenlab.errors import CutoffError, SolverError
from greenlab.green import GreenKernel, NystromMatrix, nystrom_matrix
from greenlab.grid import Grid, GridFunction, inner_product

BETA_CUTOFF = 1e-12
RESIDUAL_TOL = 1e-10
# below this size, or when k is a large fraction of it, a dense solve is cheaper
DENSE_LIMIT = 300


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Eigenpairs ordered by ascending lambda, with betas[i] * lambdas[i] == 1."""

    betas: np.ndarray = field(repr=False)
    lambdas: np.ndarray
    eigenfunctions: list = field(repr=False)
    grid: Grid = field(repr=False)
    source: dict = field(default_factory=dict)

    @property
    def k(self):
        return len(self.lambdas)

    def to_csv(self, target=None):
        from greenlab.grid import write_columns

        idx = np.arange(1, self.k + 1)
        return write_columns(target, "index,beta,lambda", [idx, self.betas, self.lambdas])


def _as_array(M):
    return M.entries if isinstance(M, NystromMatrix) else np.asarray(M, dtype=float)


def eigendecompose(M, k: int) -> tuple[np.ndarray, np.ndarray]:
    """The k eigenpairs of largest |beta|, ordered by decreasing |beta|.

    Returns (betas, vectors) with vectors[:, i] unit-norm. Large matrices use
    Lanczos from a fixed start vector, so results are deterministic.
    """
    A = _as_array(M)
    size = A.shape[0]
    if not 1 <= k <= size:
        raise ValueError(f"k={k} must lie in [1, {size}]")
    if size <= DENSE_LIMIT or 3 * k >= size:
        try:
            betas, vecs = sla.eigh(A)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"dense symmetric eigensolver failed: {exc}") from exc
    else:
        v0 = np.linspace(1.0, 2.0, size)
        try:
            betas, vecs = eigsh(A, k=k, which="LM", v0=v0, tol=1e-14, maxiter=50 * size)
        except (ArpackNoConvergence, ArpackError) as exc:
            raise SolverError(f"Lanczos did not converge: {exc}") from exc
    # stable sort so ties keep a reproducible order
    order = np.argsort(-np.abs(betas), kind="stable")[:k]
    betas, vecs = betas[order], vecs[:, order]
    norm = max(float(np.max(np.abs(betas))), np.finfo(float).tiny)
    residual = np.linalg.norm(A @ vecs - vecs * betas[None, :], axis=0)
    worst = float(np.max(residual))
    if worst > RESIDUAL_TOL * norm:
        raise SolverError(f"eigen-residual {worst:.3e} exceeds {RESIDUAL_TOL:g} * |M|", residual=worst)
    return betas, vecs


def _fix_sign(values: np.ndarray) -> np.ndarray:
    # first interior node positive; fall back to the first clearly nonzero node
    ref = values[1] if abs(values[1]) > 1e-14 * np.max(np.abs(values)) else values[np.argmax(np.abs(values) > 0)]
    return -values if ref < 0 else values


def spectrum_of_L(gk: GreenKernel, k: int, source=None) -> SpectrumResult:
    M = nystrom_matrix(gk)
    betas, vecs = eigendecompose(M, k)
    small = np.abs(betas) < BETA_CUTOFF
    if np.any(small):
        i = int(np.argmax(small))
        raise CutoffError(
            f"eigenvalue {i + 1} of T is {betas[i]:.3e}, below cutoff {BETA_CUTOFF:g}; k={k} too large for n={gk.grid.n}"
        )
    lambdas = 1.0 / betas
    order = np.argsort(lambdas, kind="stable")
    grid = gk.grid
    efuns = []
    for idx in order:
        e = vecs[:, idx] / M.sqrt_weights
        e[0] = e[-1] = 0.0
        f = GridFunction(grid, e)
        e = _fix_sign(e / np.sqrt(inner_product(f, f)))
        efuns.append(GridFunction(grid, e, h_element=True))
    return SpectrumResult(
        betas=betas[order], lambdas=lambdas[order], eigenfunctions=efuns, grid=grid, source=source or {}
    )


def dirichlet_reference(k: int, grid: Grid) -> SpectrumResult:
    """lambda_j = j^2 pi^2, e_j = sqrt(2) sin(j pi x): the B = 0 case."""
    j = np.arange(1, k + 1)
    lambdas = (j * np.pi) ** 2
    efuns = [grid.sample(lambda x, m=m: np.sqrt(2) * np.sin(m * np.pi * x), h_element=True) for m in j]
    return SpectrumResult(betas=1.0 / lambdas, lambdas=lambdas, eigenfunctions=efuns, grid=grid, source={"label": "dirichlet"})
