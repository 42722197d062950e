"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``; the lines are also
collected into an "acceptance criteria" section of the terminal summary.
"""

import contextlib
import io
import json

import numpy as np
import pytest

from conftest import SEEDS, direct_pair, fredholm_pair, grid, nested_path, path
from greenlab.brownian import linear_path, piecewise_linear, zero_path
from greenlab.cli import main
from greenlab.ensemble import EnsembleConfig, dumps, run_ensemble
from greenlab.green import build_green
from greenlab.homogeneous import kernel_matrix, solve_direct, wronskian
from greenlab.spectrum import spectrum_of_L
from greenlab.verify import ito_gap, sup_rel
from greenlab.weak_form import sine_basis, verify_right_inverse

N = 2000
PI2 = np.pi**2


def _pipeline(p):
    u, v = solve_direct(p, "u"), solve_direct(p, "v")
    alpha, spread = wronskian(u, v)
    return u, v, alpha, spread, build_green(u, v, alpha)


def test_criterion_1_zero_path(acceptance_report):
    p = zero_path(grid(N))
    u, v, alpha, _, gk = _pipeline(p)
    g_err = float(np.max(np.abs(gk.lattice - kernel_matrix(p.grid))))
    lam = spectrum_of_L(gk, 3).lambdas
    ref = PI2 * np.array([1.0, 4.0, 9.0])
    lam_err = float(np.max(np.abs(lam - ref) / ref))
    ok = g_err <= 1e-10 and abs(alpha - 1) <= 1e-12 and lam_err <= 1e-3
    acceptance_report(1, ok, f"|G-K|={g_err:.2e} (<=1e-10), |alpha-1|={abs(alpha - 1):.2e} (<=1e-12), "
                             f"max rel lambda err={lam_err:.2e} (<=1e-3)")
    assert g_err <= 1e-10
    assert abs(alpha - 1) <= 1e-12
    assert lam_err <= 1e-3


def test_criterion_2_constant_potential(acceptance_report):
    p = linear_path(grid(N), 4.0)
    u, v, alpha, _, gk = _pipeline(p)
    u_half = float(u.values.values[N // 2])
    u_ref, a_ref = np.sinh(1) / np.sinh(2), 2 / np.sinh(2)
    lam1 = float(spectrum_of_L(gk, 1).lambdas[0])
    lam_err = abs(lam1 - (PI2 + 4)) / (PI2 + 4)
    ok = abs(u_half - u_ref) <= 2e-3 and abs(alpha - a_ref) <= 2e-3 and lam_err <= 2e-3
    acceptance_report(2, ok, f"u(0.5)={u_half:.6f} vs {u_ref:.6f}, alpha={alpha:.6f} vs {a_ref:.6f} (2e-3), "
                             f"lambda_1={lam1:.5f} rel err {lam_err:.2e} (<=2e-3)")
    assert abs(u_half - u_ref) <= 2e-3
    assert abs(alpha - a_ref) <= 2e-3
    assert lam_err <= 2e-3


def test_criterion_3_wronskian(acceptance_report):
    stats = [direct_pair(s, N)[2] for s in SEEDS]
    alphas = np.array([a for a, _ in stats])
    spreads = np.array([sp for _, sp in stats])
    ok = bool(np.all(spreads <= 1e-2) and np.all(alphas > 0))
    acceptance_report(3, ok, f"{len(SEEDS)} seeds: max spread={spreads.max():.2e} (<=1e-2), min alpha={alphas.min():.4f} (>0)")
    assert np.all(spreads <= 1e-2)
    assert np.all(alphas > 0)


def test_criterion_4_cross_method(acceptance_report):
    gaps = []
    for s in SEEDS:
        u, v, _ = direct_pair(s, N)
        uf, vf = fredholm_pair(s, N)
        gaps.append(max(sup_rel(u, uf), sup_rel(v, vf)))
    worst = max(gaps)
    acceptance_report(4, worst <= 5e-3, f"{len(SEEDS)} seeds: max relative sup gap={worst:.2e} (<=5e-3)")
    assert worst <= 5e-3


@pytest.mark.slow
def test_criterion_5_right_inverse(acceptance_report):
    seeds = SEEDS[:10]
    levels = (1000, 2000, 4000)
    res = {n: [] for n in levels}
    for n in levels:
        basis = sine_basis(grid(n))
        for s in seeds:
            p = nested_path(s, n)
            *_, gk = _pipeline(p)
            res[n].append(verify_right_inverse(p, gk, basis).max_residual)
    worst = max(res[N])
    med = [float(np.median(res[n])) for n in levels]
    ratios = [med[0] / med[1], med[1] / med[2]]
    ok = worst <= 1e-2 and min(ratios) >= 1.4
    acceptance_report(5, ok, f"max residual at n=2000={worst:.2e} (<=1e-2); medians "
                             f"{med[0]:.2e}/{med[1]:.2e}/{med[2]:.2e}, ratios {ratios[0]:.2f}, {ratios[1]:.2f} (>=1.4)")
    assert worst <= 1e-2
    assert min(ratios) >= 1.4


def test_criterion_6_ito_consistency(acceptance_report):
    basis = sine_basis(grid(N))
    gaps = np.array([ito_gap(path(s, N), basis) for s in SEEDS])
    trend_seeds = SEEDS[:5]
    med = []
    for n in (1000, 2000, 4000):
        b = sine_basis(grid(n))
        med.append(float(np.median([ito_gap(nested_path(s, n), b) for s in trend_seeds])))
    ratios = [med[0] / med[1], med[1] / med[2]]
    worst = float(gaps.max())
    bad = [s for s, g in zip(SEEDS, gaps) if g > 1e-2]
    ok = worst <= 1e-2 and min(ratios) >= 1.6
    acceptance_report(6, ok, f"max |weak-bilinear|/(1+|E|) at n=2000={worst:.4f} (<=1e-2), seeds over: {bad}; "
                             f"halving ratios {ratios[0]:.2f}, {ratios[1]:.2f} (>=1.6)")
    assert min(ratios) >= 1.6
    assert worst <= 1e-2


def test_criterion_7_discrete_spectrum(acceptance_report):
    kmax = 15
    lo, hi, all_real, all_dec = np.inf, -np.inf, True, True
    for s in SEEDS:
        u, v, (alpha, _) = direct_pair(s, N)
        spec = spectrum_of_L(build_green(u, v, alpha), kmax)
        betas = spec.betas
        all_real &= bool(np.isrealobj(betas) and np.all(np.isfinite(betas)))
        absb = np.abs(betas)
        all_dec &= bool(np.all(np.diff(absb) < 0) and absb[-1] >= 1e-12)
        r = betas[4:kmax] * (np.arange(5, kmax + 1) * np.pi) ** 2
        lo, hi = min(lo, r.min()), max(hi, r.max())
    ok = all_real and all_dec and 0.8 <= lo and hi <= 1.25
    acceptance_report(7, ok, f"real={all_real}, |beta| strictly decreasing={all_dec}, "
                             f"beta_k k^2 pi^2 over k=5..15 in [{lo:.4f}, {hi:.4f}] (within [0.8, 1.25])")
    assert all_real and all_dec
    assert 0.8 <= lo and hi <= 1.25


def test_criterion_8_piecewise_linear(acceptance_report):
    ms = (N // 16, N // 4, N)
    dist = {m: [] for m in ms}
    for s in SEEDS:
        p = path(s, N)
        u, v, _ = direct_pair(s, N)
        for m in ms:
            q = piecewise_linear(p, m)
            uq, vq = solve_direct(q, "u"), solve_direct(q, "v")
            dist[m].append(max(float(np.max(np.abs(uq.values.values - u.values.values))),
                               float(np.max(np.abs(vq.values.values - v.values.values)))))
    med = [float(np.median(dist[m])) for m in ms]
    ok = med[0] > med[1] > med[2]
    acceptance_report(8, ok, "median sup distance for m=" + ", ".join(f"{m}: {d:.2e}" for m, d in zip(ms, med))
                      + " (strictly decreasing)")
    assert med[0] > med[1] > med[2]


def _cli_run(argv, out):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv + ["--out", str(out)])
    files = {f.name: f.read_bytes() for f in sorted(out.iterdir())}
    return code, buf.getvalue(), files


def test_criterion_9_reproducibility(acceptance_report, tmp_path):
    invocations = [
        ["sample", "--seed", "5", "--n", "500"],
        ["homogeneous", "--seed", "5", "--n", "500"],
        ["green", "--seed", "5", "--n", "100"],
        ["spectrum", "--seed", "5", "--n", "500", "--k", "5", "--eigenfunctions"],
        ["verify", "--seed", "5", "--n", "500"],
        ["ensemble", "--seed", "5", "--n", "200", "--num-paths", "4", "--k", "3"],
    ]
    identical = True
    for i, argv in enumerate(invocations):
        a = _cli_run(argv, tmp_path / f"a{i}")
        b = _cli_run(argv, tmp_path / f"b{i}")
        # exit status is part of the compared tuple; verify at n=500 may legitimately exit 2
        identical &= a == b and a[0] in (0, 2) and bool(a[2])
    cfg = dict(master_seed=2024, num_paths=100, n=500, k=5)
    one = run_ensemble(EnsembleConfig(workers=1, **cfg))
    eight = run_ensemble(EnsembleConfig(workers=8, **cfg))
    same_agg = dumps(one.aggregates) == dumps(eight.aggregates)
    same_rows = json.dumps(one.per_path) == json.dumps(eight.per_path)
    ok = identical and same_agg and same_rows
    acceptance_report(9, ok, f"CLI outputs byte-identical={identical}; ensemble workers 1 vs 8 "
                             f"(100 paths, n=500): aggregates identical={same_agg}, per-path identical={same_rows}")
    assert identical
    assert same_agg and same_rows
