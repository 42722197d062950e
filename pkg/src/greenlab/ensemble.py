"""Monte Carlo ensembles of seeded paths, reduced in path-index order."""

from __future__ import annotations

import json
import logging
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from greenlab import __version__
from greenlab.brownian import derive_seed, linear_path, sample_brownian, zero_path
from greenlab.errors import NumericalError
from greenlab.green import build_green
from greenlab.grid import fmt, make_grid
from greenlab.homogeneous import solve_direct, solve_fredholm, wronskian
from greenlab.spectrum import spectrum_of_L

log = logging.getLogger(__name__)

METHODS = ("direct", "fredholm", "both")
QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)


@dataclass
class EnsembleConfig:
    master_seed: int = 0
    num_paths: int = 100
    n: int = 2000
    k: int = 5
    method: str = "direct"
    workers: int = 1
    output_dir: str | None = None
    # "zero" or "linear:<c>": replace every sampled path by an oracle path
    override: str | None = None

    def __post_init__(self):
        if self.num_paths < 1:
            raise ValueError("num_paths must be >= 1")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not 1 <= self.k <= self.n + 1:
            raise ValueError(f"k must lie in [1, n+1], got k={self.k}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.override is not None:
            _override_path(self.override, make_grid(2))

    @classmethod
    def from_dict(cls, data: dict) -> "EnsembleConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "EnsembleConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class EnsembleResult:
    config: EnsembleConfig
    per_path: list
    aggregates: dict
    manifest: dict = field(default_factory=dict)


def _override_path(spec, grid):
    if spec == "zero":
        return zero_path(grid)
    if isinstance(spec, str) and spec.startswith("linear:"):
        return linear_path(grid, float(spec.split(":", 1)[1]))
    raise ValueError(f"override must be 'zero' or 'linear:<c>', got {spec!r}")


def run_path(task) -> dict:
    """Full pipeline for one path: sample, solve u and v, alpha, G, spectrum."""
    index, seed, n, k, method, override = task
    grid = make_grid(n)
    record = {"index": index, "seed": seed, "alpha": float("nan"), "wronskian_spread": float("nan"),
              "lambdas": [float("nan")] * k, "cross_method": float("nan"), "flags": [], "ok": False}
    try:
        path = _override_path(override, grid) if override else sample_brownian(grid, seed)
        primary = "fredholm" if method == "fredholm" else "direct"
        solver = solve_fredholm if primary == "fredholm" else solve_direct
        u, v = solver(path, "u"), solver(path, "v")
        alpha, spread = wronskian(u, v)
        if method == "both":
            uf, vf = solve_fredholm(path, "u"), solve_fredholm(path, "v")
            record["cross_method"] = max(
                float(np.max(np.abs(u.values.values - uf.values.values))) / u.values.sup(),
                float(np.max(np.abs(v.values.values - vf.values.values))) / v.values.sup(),
            )
            if record["cross_method"] > 5e-3:
                record["flags"].append("cross_method")
        if alpha <= 0:
            record["flags"].append("alpha_nonpositive")
        if spread > 1e-2:
            record["flags"].append("wronskian_spread")
        spec = spectrum_of_L(build_green(u, v, alpha), k)
        record.update(alpha=alpha, wronskian_spread=spread, lambdas=[float(x) for x in spec.lambdas], ok=True)
    except NumericalError as exc:
        record["flags"].append(f"{type(exc).__name__}: {exc}".replace(",", ";"))
    return record


def _run_serial(tasks):
    with threadpool_limits(limits=1):
        return [run_path(t) for t in tasks]


def _init_worker():
    threadpool_limits(limits=1)


def _summary(values):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return {"mean": float("nan"), "variance": float("nan"), "quantiles": {}}
    return {
        "mean": float(np.mean(values)),
        "variance": float(np.var(values, ddof=1)) if values.size > 1 else 0.0,
        "quantiles": {str(q): float(np.quantile(values, q)) for q in QUANTILES},
    }


def aggregate(per_path: list, k: int) -> dict:
    good = [r for r in sorted(per_path, key=lambda r: r["index"]) if r["ok"]]
    lam = np.array([r["lambdas"] for r in good]).reshape(len(good), k)
    out = {"num_paths": len(per_path), "num_ok": len(good), "num_failed": len(per_path) - len(good),
           "num_flagged": sum(1 for r in good if r["flags"]),
           "alpha": _summary([r["alpha"] for r in good])}
    for i in range(k):
        out[f"lambda_{i + 1}"] = _summary(lam[:, i])
    return out


def run_ensemble(config: EnsembleConfig) -> EnsembleResult:
    start = time.perf_counter()
    tasks = [
        (i, derive_seed(config.master_seed, i), config.n, config.k, config.method, config.override)
        for i in range(config.num_paths)
    ]
    if config.workers == 1:
        per_path = _run_serial(tasks)
    else:
        ctx = multiprocessing.get_context("spawn")
        chunk = max(1, len(tasks) // (4 * config.workers))
        with ProcessPoolExecutor(config.workers, mp_context=ctx, initializer=_init_worker) as ex:
            per_path = list(ex.map(run_path, tasks, chunksize=chunk))
    per_path.sort(key=lambda r: r["index"])
    failed = sum(1 for r in per_path if not r["ok"])
    if failed:
        log.warning("%d of %d paths failed and were excluded from aggregates", failed, len(per_path))
    manifest = {
        "master_seed": config.master_seed,
        "num_paths": config.num_paths,
        "n": config.n,
        "k": config.k,
        "method": config.method,
        "override": config.override,
        "version": __version__,
        "wall_time_s": time.perf_counter() - start,
    }
    return EnsembleResult(config=config, per_path=per_path, aggregates=aggregate(per_path, config.k), manifest=manifest)


def dumps(obj, indent=2) -> str:
    """JSON with every float written at 17 significant digits."""

    def enc(o, depth):
        pad, inner = " " * (indent * depth), " " * (indent * (depth + 1))
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{inner}{json.dumps(str(key))}: {enc(val, depth + 1)}" for key, val in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + pad + "}"
        if isinstance(o, (list, tuple)):
            return "[" + ", ".join(enc(v, depth + 1) for v in o) + "]"
        if isinstance(o, (bool, np.bool_, type(None), str)):
            return json.dumps(o.item() if isinstance(o, np.bool_) else o)
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return fmt(o) if np.isfinite(o) else "NaN"
        raise TypeError(f"cannot encode {type(o).__name__}")

    return enc(obj, 0) + "\n"


def write_results(result: EnsembleResult, dir) -> None:
    """results.csv, aggregates.json, manifest.json; wall time is not written."""
    out = Path(dir)
    k = result.config.k
    header = ["index", "seed", "alpha", "wronskian_spread"] + [f"lambda_{i + 1}" for i in range(k)]
    header += ["cross_method", "check_flags"]
    lines = [",".join(header)]
    for r in result.per_path:
        nums = [r["alpha"], r["wronskian_spread"], *r["lambdas"], r["cross_method"]]
        flags = ";".join(r["flags"]) if r["flags"] else "ok"
        lines.append(",".join([str(r["index"]), str(r["seed"]), *(fmt(x) for x in nums)]) + "," + flags)
    manifest = {key: val for key, val in result.manifest.items() if key != "wall_time_s"}
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "results.csv").write_text("\n".join(lines) + "\n")
        (out / "aggregates.json").write_text(dumps(result.aggregates))
        (out / "manifest.json").write_text(dumps(manifest))
    except OSError as exc:
        raise OSError(f"cannot write ensemble results to {out}: {exc.strerror or exc}") from exc


def config_dict(config: EnsembleConfig) -> dict:
    return asdict(config)
