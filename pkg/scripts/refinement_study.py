"""Grid-refinement table for one or more seeds on nested grids.

For each n, prints the right-inverse residual, the Ito gap between the dB
and integrated-by-parts forms, and the direct/Fredholm gap.

    python scripts/refinement_study.py --seeds 0 1 2 --levels 500 1000 2000 4000
"""

import argparse

import numpy as np

from greenlab.brownian import restrict, sample_brownian
from greenlab.green import build_green
from greenlab.grid import make_grid
from greenlab.homogeneous import solve_direct, solve_fredholm, wronskian
from greenlab.verify import ito_gap, sup_rel
from greenlab.weak_form import sine_basis, verify_right_inverse


def row(path):
    u, v = solve_direct(path, "u"), solve_direct(path, "v")
    alpha, _ = wronskian(u, v)
    gk = build_green(u, v, alpha)
    basis = sine_basis(path.grid)
    cross = max(sup_rel(u, solve_fredholm(path, "u")), sup_rel(v, solve_fredholm(path, "v")))
    return verify_right_inverse(path, gk, basis).max_residual, ito_gap(path, basis), cross


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--levels", type=int, nargs="+", default=[500, 1000, 2000])
    args = ap.parse_args(argv)
    finest = max(args.levels)
    if any(finest % n for n in args.levels):
        ap.error("every level must divide the finest one")
    print("seed,n,right_inverse,ito_gap,cross_method")
    table = {n: [] for n in args.levels}
    for s in args.seeds:
        full = sample_brownian(make_grid(finest), s)
        for n in sorted(args.levels):
            r = row(restrict(full, n))
            table[n].append(r)
            print(f"{s},{n},{r[0]:.3e},{r[1]:.3e},{r[2]:.3e}")
    print("# medians")
    for n in sorted(args.levels):
        med = np.median(np.array(table[n]), axis=0)
        print(f"# n={n}: " + ", ".join(f"{x:.3e}" for x in med))


if __name__ == "__main__":
    main()
