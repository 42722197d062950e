"""Per-path check suite behind ``greenlab verify``.

Every check yields ``{"value": ..., "threshold": ..., "pass": bool}``. Oracle
paths (B = 0, B = c x) additionally get their closed-form checks.
"""

from __future__ import annotations

import numpy as np

from greenlab.brownian import BrownianPath
from greenlab.green import apply_T, build_green
from greenlab.grid import inner_product
from greenlab.homogeneous import kernel_matrix, solve_direct, solve_fredholm, wronskian
from greenlab.spectrum import spectrum_of_L
from greenlab.weak_form import (
    bilinear_form,
    homogeneous_residual,
    sine_basis,
    tilde_domain_check,
    verify_right_inverse,
    weak_apply,
)

BAND = (0.8, 1.25)
BAND_MODES = range(5, 16)


def _check(value, threshold, ok=None):
    value = float(value)
    return {"value": value, "threshold": threshold, "pass": bool(value <= threshold if ok is None else ok)}


def sup_rel(a, b):
    return float(np.max(np.abs(a.values.values - b.values.values))) / a.values.sup()


def ito_gap(path, basis):
    """max over basis pairs of |weak_apply - bilinear_form| / (1 + |E|)."""
    worst = 0.0
    for f in basis:
        for h in basis:
            e = bilinear_form(path, f, h)
            worst = max(worst, abs(weak_apply(path, f, h) - e) / (1.0 + abs(e)))
    return worst


def constant_potential(c):
    """(u(1/2), alpha) for u'' = c u, u(0)=0, u(1)=1."""
    if c > 0:
        r = np.sqrt(c)
        return np.sinh(r / 2) / np.sinh(r), r / np.sinh(r)
    if c < 0:
        r = np.sqrt(-c)
        return np.sin(r / 2) / np.sin(r), r / np.sin(r)
    return 0.5, 1.0


def verify_path(path: BrownianPath, drift: float | None = None) -> dict:
    grid = path.grid
    checks = {}
    u, v = solve_direct(path, "u"), solve_direct(path, "v")
    uf, vf = solve_fredholm(path, "u"), solve_fredholm(path, "v")
    bd = max(abs(u.values.values[0]), abs(u.values.values[-1] - 1), abs(v.values.values[0] - 1), abs(v.values.values[-1]))
    checks["boundary_direct"] = _check(bd, 0.0)
    alpha, spread = wronskian(u, v)
    checks["wronskian_positive"] = _check(alpha, 0.0, ok=alpha > 0)
    checks["wronskian_spread"] = _check(spread, 1e-2)
    checks["cross_method"] = _check(max(sup_rel(u, uf), sup_rel(v, vf)), 5e-3)

    gk = build_green(u, v, alpha)
    basis = sine_basis(grid)
    checks["homogeneous_weak"] = _check(
        max(homogeneous_residual(path, u, basis).max_residual, homogeneous_residual(path, v, basis).max_residual), 1e-2
    )
    checks["right_inverse"] = _check(verify_right_inverse(path, gk, basis).max_residual, 1e-2)
    g2 = grid.sample(lambda x: np.sin(2 * np.pi * x), h_element=True)
    checks["tilde_domain"] = _check(tilde_domain_check(path, gk, g2, basis).max_residual, 1e-2)
    checks["ito_consistency"] = _check(ito_gap(path, basis), 1e-2)

    kmax = max(BAND_MODES)
    if grid.n + 1 > 3 * kmax:
        spec = spectrum_of_L(gk, kmax)
        absb = np.abs(spec.betas)
        ratios = [spec.betas[k - 1] * (k * np.pi) ** 2 for k in BAND_MODES]
        lo, hi = min(ratios), max(ratios)
        checks["spectrum_decreasing"] = _check(0.0, 0.0, ok=bool(np.all(np.diff(absb) < 0)))
        checks["spectrum_band"] = {"value": [lo, hi], "threshold": list(BAND), "pass": BAND[0] <= lo and hi <= BAND[1]}

    if drift is not None:
        u_half, alpha_ref = constant_potential(drift)
        i_half = grid.n // 2 if grid.n % 2 == 0 else None
        if i_half is not None:
            checks["oracle_u_half"] = _check(abs(u.values.values[i_half] - u_half), 2e-3)
        checks["oracle_alpha"] = _check(abs(alpha - alpha_ref), 1e-12 if drift == 0 else 2e-3)
        lam = spectrum_of_L(gk, 3).lambdas
        ref = (np.arange(1, 4) * np.pi) ** 2 + drift
        tol = 1e-3 if drift == 0 else 2e-3
        checks["oracle_lambdas"] = _check(float(np.max(np.abs(lam - ref) / np.abs(ref))), tol)
        if drift == 0:
            checks["oracle_G_equals_K"] = _check(float(np.max(np.abs(gk.lattice - kernel_matrix(grid)))), 1e-10)
            f = basis.functions[0]
            Tf = apply_T(gk, f)
            err = float(np.max(np.abs(Tf.values - f.values / np.pi**2)))
            checks["oracle_T_sine"] = _check(err, 1e-5)
            checks["oracle_right_inverse_sine"] = _check(abs(bilinear_form(path, Tf, f) - inner_product(f, f)), 1e-4)

    return {
        "path": path.describe(),
        "alpha": alpha,
        "checks": checks,
        "pass": all(c["pass"] for c in checks.values()),
    }
