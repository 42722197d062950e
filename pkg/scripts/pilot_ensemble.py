"""Pilot run for the ensemble sanity band on the mean of lambda_1.

    python scripts/pilot_ensemble.py --num-paths 5000 --n 1000 --out runs/pilot
"""

import argparse
import math
import sys

from greenlab.ensemble import EnsembleConfig, run_ensemble, write_results


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--num-paths", type=int, default=5000)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="runs/pilot")
    args = ap.parse_args(argv)

    cfg = EnsembleConfig(master_seed=args.seed, num_paths=args.num_paths, n=args.n, k=args.k,
                         workers=args.workers, output_dir=args.out)
    res = run_ensemble(cfg)
    write_results(res, args.out)
    lam1 = res.aggregates["lambda_1"]
    se = math.sqrt(lam1["variance"] / res.aggregates["num_ok"])
    print(f"paths ok: {res.aggregates['num_ok']}/{args.num_paths}  wall {res.manifest['wall_time_s']:.1f}s")
    print(f"mean lambda_1 = {lam1['mean']:.6f} +- {3 * se:.6f} (3 SE); pi^2 = {math.pi ** 2:.6f}")
    print(f"mean alpha    = {res.aggregates['alpha']['mean']:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
