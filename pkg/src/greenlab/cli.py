"""Command line entry point: ``greenlab <subcommand> [flags]``.

Exit status: 0 success, 1 usage error, 2 numerical failure, 3 I/O failure.
``verify`` additionally exits 2 when any check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from greenlab.brownian import linear_path, read_path, sample_brownian, zero_path
from greenlab.ensemble import EnsembleConfig, dumps, run_ensemble, write_results
from greenlab.errors import NumericalError, PathError
from greenlab.green import build_green
from greenlab.grid import make_grid, write_columns
from greenlab.homogeneous import solve, wronskian
from greenlab.spectrum import spectrum_of_L
from greenlab.verify import verify_path

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3

SUBCOMMANDS = ("sample", "homogeneous", "green", "spectrum", "verify", "ensemble")


class UsageError(Exception):
    def __init__(self, message, usage=""):
        super().__init__(message)
        self.usage = usage


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_usage())


SCHEMAS = {
    "sample": "output: path.csv (or stdout) with header 'x,B', one row per node, 17 significant digits.",
    "homogeneous": (
        "output: homogeneous.csv with header 'x,u,du,v,dv'; stdout and summary.json hold "
        "{alpha, spread, method, seed, n}."
    ),
    "green": "output: green.csv with header 'x,y,G' over the full node lattice; stdout and green.json hold {alpha, seed, n}.",
    "spectrum": (
        "output: stdout and spectrum.csv with header 'index,beta,lambda' (ascending lambda); "
        "with --eigenfunctions also eigenfunction_<i>.csv with header 'x,value'."
    ),
    "verify": "output: JSON report {per-path: {checks: {name: {value, threshold, pass}}}, pass} on stdout and verify.json.",
    "ensemble": (
        "output directory: results.csv (index,seed,alpha,wronskian_spread,lambda_1..k,cross_method,check_flags), "
        "aggregates.json (mean/variance/quantiles of alpha and each lambda), manifest.json."
    ),
}


def _add_path_source(p, multi_seed=False, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    if multi_seed:
        g.add_argument("--seed", type=int, nargs="+", help="one or more seeds for sampled Brownian paths")
    else:
        g.add_argument("--seed", type=int, help="seed of a sampled Brownian path")
    g.add_argument("--zero", action="store_true", help="B = 0 (potential zero)")
    g.add_argument("--drift", type=float, metavar="C", help="B(x) = C x (constant potential C)")
    g.add_argument("--path-file", metavar="CSV", help="path CSV with header 'x,B'")


def build_parser() -> Parser:
    parser = Parser(prog="greenlab", description="Green kernel and spectrum of -d^2/dx^2 + B'(x) on [0,1].")
    sub = parser.add_subparsers(dest="subcommand", parser_class=Parser, metavar="{" + ",".join(SUBCOMMANDS) + "}")
    helps = {
        "sample": "sample a Brownian path",
        "homogeneous": "solve Lf = 0 for u and v",
        "green": "tabulate the Green kernel G",
        "spectrum": "eigenvalues of T and of L",
        "verify": "run the check suite, exit 0 iff all pass",
        "ensemble": "Monte Carlo ensemble of spectra",
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=helps[name], description=helps[name], epilog=SCHEMAS[name])
        p.add_argument("--n", type=int, default=None, help="grid subintervals (default 2000)")
        p.add_argument("--out", default=None, help="output directory")
        if name == "ensemble":
            _add_path_source(p, required=False)
            p.add_argument("--config", help="JSON file with EnsembleConfig fields; flags override it")
            p.add_argument("--num-paths", type=int, default=None)
            p.add_argument("--workers", type=int, default=None)
        else:
            _add_path_source(p, multi_seed=name == "verify")
        if name in ("homogeneous", "green", "spectrum", "ensemble"):
            choices = ("direct", "fredholm", "both") if name == "ensemble" else ("direct", "fredholm")
            p.add_argument("--method", choices=choices, default=None, help="solver route (default direct)")
        if name in ("spectrum", "ensemble"):
            p.add_argument("--k", type=int, default=None, help="number of eigenvalues (default 5)")
        if name == "spectrum":
            p.add_argument("--eigenfunctions", action="store_true", help="also write eigenfunction CSVs")
    return parser


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand is None:
        raise UsageError("a subcommand is required", parser.format_usage())
    return args


def _paths(args):
    n = args.n if args.n is not None else 2000
    if args.path_file:
        return [(read_path(args.path_file), None)]
    grid = make_grid(n)
    if args.zero:
        return [(zero_path(grid), 0.0)]
    if args.drift is not None:
        return [(linear_path(grid, args.drift), args.drift)]
    seeds = args.seed if isinstance(args.seed, list) else [args.seed]
    return [(sample_brownian(grid, s), None) for s in seeds]


def _outdir(args):
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(out, name, text):
    (out / name).write_text(text)


def _cmd_sample(args, stdout):
    (path, _), = _paths(args)
    out = _outdir(args)
    if out is None:
        stdout.write(path.to_csv())
    else:
        path.to_csv(out / "path.csv")
    return EXIT_OK


def _solve_pair(path, method):
    u, v = solve(path, "u", method), solve(path, "v", method)
    alpha, spread = wronskian(u, v)
    return u, v, alpha, spread


def _cmd_homogeneous(args, stdout):
    (path, _), = _paths(args)
    method = args.method or "direct"
    u, v, alpha, spread = _solve_pair(path, method)
    summary = {"alpha": alpha, "spread": spread, "method": method, "seed": path.seed, "n": path.grid.n}
    out = _outdir(args)
    if out is not None:
        cols = [path.grid.nodes, u.values.values, u.derivative_values.values, v.values.values, v.derivative_values.values]
        write_columns(out / "homogeneous.csv", "x,u,du,v,dv", cols)
        _write(out, "summary.json", dumps(summary))
    stdout.write(dumps(summary))
    return EXIT_OK


def _cmd_green(args, stdout):
    (path, _), = _paths(args)
    u, v, alpha, _ = _solve_pair(path, args.method or "direct")
    gk = build_green(u, v, alpha)
    header = {"alpha": alpha, "seed": path.seed, "n": path.grid.n}
    out = _outdir(args)
    if out is not None:
        gk.to_csv(out / "green.csv")
        _write(out, "green.json", dumps(header))
    stdout.write(dumps(header))
    return EXIT_OK


def _cmd_spectrum(args, stdout):
    (path, _), = _paths(args)
    u, v, alpha, _ = _solve_pair(path, args.method or "direct")
    spec = spectrum_of_L(build_green(u, v, alpha), args.k or 5, source=path.describe())
    text = spec.to_csv()
    out = _outdir(args)
    if out is not None:
        _write(out, "spectrum.csv", text)
        if args.eigenfunctions:
            for i, e in enumerate(spec.eigenfunctions, start=1):
                e.to_csv(out / f"eigenfunction_{i}.csv")
    stdout.write(text)
    return EXIT_OK


def _cmd_verify(args, stdout):
    reports = [verify_path(path, drift) for path, drift in _paths(args)]
    report = {"paths": reports, "pass": all(r["pass"] for r in reports)}
    text = dumps(report)
    out = _outdir(args)
    if out is not None:
        _write(out, "verify.json", text)
    stdout.write(text)
    return EXIT_OK if report["pass"] else EXIT_NUMERICAL


def _cmd_ensemble(args, stdout):
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    overrides = {
        "n": args.n, "k": args.k, "method": args.method, "num_paths": args.num_paths,
        "workers": args.workers, "output_dir": args.out, "master_seed": args.seed,
    }
    data.update({key: val for key, val in overrides.items() if val is not None})
    if args.zero:
        data["override"] = "zero"
    elif args.drift is not None:
        data["override"] = f"linear:{args.drift!r}"
    try:
        cfg = EnsembleConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid ensemble config: {exc}") from exc
    res = run_ensemble(cfg)
    if cfg.output_dir:
        write_results(res, cfg.output_dir)
    stdout.write(dumps(res.aggregates))
    print(f"wall time {res.manifest['wall_time_s']:.2f}s", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "sample": _cmd_sample,
    "homogeneous": _cmd_homogeneous,
    "green": _cmd_green,
    "spectrum": _cmd_spectrum,
    "verify": _cmd_verify,
    "ensemble": _cmd_ensemble,
}


def run(args, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        return COMMANDS[args.subcommand](args, stdout)
    except UsageError as exc:
        print(f"greenlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PathError, ValueError) as exc:
        print(f"greenlab: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"greenlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"greenlab: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


def main(argv=None) -> int:
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        sys.stderr.write(exc.usage)
        print(f"greenlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
