"""Command-line harness: ``train``, ``prune`` and ``benchmark``."""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .dataset import load_csv, split, synthesize
from .learners import PredictionMatrix, fit_bagging, predict_matrix
from .objectives import error_rate
from .personalize import VARIANTS, Assignment, TradeoffProfile, run_variant
from .solver import SolverConfig

RESULTS_HEADER = ["variant", "n", "rep", "time_ms", "mean_loss", "max_loss", "archive_size"]
DEFAULT_SWEEP = list(range(1, 11)) + [20, 40, 80, 160, 320, 640, 1280]


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


@dataclass
class ExperimentConfig:
    data: str | None = None
    synthetic: tuple[int, int, int] = (4944, 43, 6)
    label_col: str = "-1"
    has_header: bool = True
    matrix: str | None = None
    test_matrix: str | None = None
    split: tuple[float, float, float] = (0.6, 0.2, 0.2)
    split_seed: int = 0
    stratify: bool = False
    m: int = 20
    max_depth: int = 8
    min_leaf: int = 2
    pool_seed: int = 0
    iterations: int = 80
    solver_seed: int = 0
    c_min: float = 0.3
    c_max: float = 1.7
    select: str = "sorted"
    peps_objective: str = "plain"
    variants: list[str] = field(default_factory=lambda: list(VARIANTS))
    n_list: list[int] = field(default_factory=lambda: list(DEFAULT_SWEEP))
    alphas: list[float] | None = None
    alpha_range: tuple[float, float] = (0.01, 0.2)
    alpha_seed: int = 0
    repetitions: int = 1
    parallel: bool = False
    out: str = "out"

    def __post_init__(self):
        if self.alpha_range[0] > self.alpha_range[1]:
            raise ValueError("--alpha-range needs LOW <= HIGH")
        if any(n < 1 for n in self.n_list):
            raise ValueError("participant counts must be positive")
        if self.repetitions < 1:
            raise ValueError("--repetitions must be >= 1")
        for v in self.variants:
            if v not in VARIANTS:
                raise ValueError(f"unknown variant {v!r}")

    def solver_config(self) -> SolverConfig:
        return SolverConfig(iterations=self.iterations, seed=self.solver_seed)

    def profile(self, n: int) -> TradeoffProfile:
        if self.alphas is not None:
            return TradeoffProfile(self.alphas)
        low, high = self.alpha_range
        # one draw per n, shared by every variant and repetition
        return TradeoffProfile.uniform(n, low, high, seed=self.alpha_seed + n)


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig(
        data=args.data,
        synthetic=tuple(_ints(args.synthetic)),
        label_col=args.label_col,
        has_header=not args.no_header,
        matrix=getattr(args, "matrix", None),
        test_matrix=getattr(args, "test_matrix", None),
        split=tuple(_floats(args.split)),
        split_seed=args.split_seed,
        stratify=args.stratify,
        m=args.m,
        max_depth=args.max_depth,
        min_leaf=args.min_leaf,
        pool_seed=args.pool_seed,
        out=args.out,
    )
    if hasattr(args, "iterations"):
        cfg.iterations = args.iterations
        cfg.solver_seed = args.solver_seed
        cfg.c_min, cfg.c_max = args.cmin, args.cmax
        cfg.select = args.select
        cfg.peps_objective = args.peps_objective
        cfg.alpha_range = tuple(_floats(args.alpha_range))
        cfg.alpha_seed = args.alpha_seed
        cfg.alphas = _floats(args.alphas) if args.alphas else None
        cfg.variants = args.variant.split(",")
        if args.n is not None:
            cfg.n_list = _ints(args.n)
        elif cfg.alphas is not None:
            cfg.n_list = [len(cfg.alphas)]
        elif args.command == "prune":
            cfg.n_list = [10]
        if cfg.alphas is not None and any(n != len(cfg.alphas) for n in cfg.n_list):
            raise ValueError("--n must equal the number of --alphas")
    if hasattr(args, "repetitions"):
        cfg.repetitions = args.repetitions
        cfg.parallel = args.parallel
    cfg.__post_init__()
    return cfg


def build_matrices(cfg: ExperimentConfig, log=None):
    """Return (validation matrix, test matrix or None, pool or None)."""
    log = log or sys.stderr
    if cfg.matrix is not None:
        valid = PredictionMatrix.load_csv(cfg.matrix)
        test = PredictionMatrix.load_csv(cfg.test_matrix) if cfg.test_matrix else None
        print(f"loaded prediction matrix {cfg.matrix}: m={valid.m}, v={valid.v}", file=log)
        return valid, test, None
    if cfg.data is not None:
        data, report = load_csv(cfg.data, cfg.label_col, cfg.has_header)
        print(f"load report: {report.summary()}", file=log)
    else:
        rows, attrs, k = cfg.synthetic
        data = synthesize(rows, attrs, k, seed=cfg.split_seed)
        print(f"synthetic data: {rows} rows, {attrs} attributes, {k} classes", file=log)
    parts = split(data, cfg.split, seed=cfg.split_seed, stratify=cfg.stratify)
    pool = fit_bagging(parts.train, cfg.m, cfg.max_depth, cfg.min_leaf, seed=cfg.pool_seed)
    return predict_matrix(pool, parts.validation), predict_matrix(pool, parts.test), pool


def _test_losses(assignment: Assignment, test: PredictionMatrix) -> np.ndarray:
    cache: dict[str, float] = {}
    out = []
    for a, e in zip(assignment.alphas, assignment.entries):
        if e.bits not in cache:
            cache[e.bits] = error_rate(e.mask, test)
        out.append(cache[e.bits] + a * e.cost)
    return np.array(out)


def cmd_train(cfg: ExperimentConfig) -> int:
    if cfg.matrix is not None:
        raise ValueError("train builds matrices from --data or --synthetic, not --matrix")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    valid, test, pool = build_matrices(cfg)
    valid.save_csv(out / "valid_matrix.csv")
    test.save_csv(out / "test_matrix.csv")
    (out / "pool.json").write_text(json.dumps(pool.to_dict()))
    print(f"pool: m={pool.m}, validation examples={valid.v}, test examples={test.v}")
    for i, err in enumerate(valid.individual_errors()):
        print(f"  tree {i:3d}  depth {pool.trees[i].tree_depth:2d}  validation error {err:.4f}")
    full = np.ones(valid.m, dtype=bool)
    print(f"full ensemble validation error {error_rate(full, valid):.4f}")
    print(f"wrote {out / 'valid_matrix.csv'}, {out / 'test_matrix.csv'}, {out / 'pool.json'}")
    return 0


def cmd_prune(cfg: ExperimentConfig) -> int:
    if len(cfg.variants) != 1 or len(cfg.n_list) != 1:
        raise ValueError("prune takes a single --variant and a single --n")
    variant, n = cfg.variants[0], cfg.n_list[0]
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    valid, _, _ = build_matrices(cfg)
    profile = cfg.profile(n)
    assignment, archives = run_variant(
        variant, valid, profile, cfg.solver_config(), cfg.c_min, cfg.c_max, cfg.select,
        cfg.peps_objective,
    )
    if variant == "peps":
        (out / "archive.json").write_text(json.dumps([a.to_json() for a in archives], indent=1))
    else:
        (out / "archive.json").write_text(archives[0].dumps())
    (out / "assignment.json").write_text(assignment.dumps())

    print(f"variant={variant} n={n} archive size={statistics.fmean(len(a) for a in archives):g}")
    print(f"{'participant':>11}  {'alpha':>8}  {'size':>4}  {'error':>7}  {'loss':>7}  mask")
    for row in assignment.to_json():
        print(
            f"{row['participant']:>11}  {row['alpha']:8.4f}  {row['size']:>4}  "
            f"{row['error']:7.4f}  {row['loss']:7.4f}  {row['mask']}"
        )
    print(f"mean loss {assignment.mean_loss:.4f}, max loss {assignment.max_loss:.4f}")
    return 0


def _timed_run(variant, pm, profile, cfg):
    t0 = time.perf_counter()
    assignment, archives = run_variant(
        variant, pm, profile, cfg.solver_config(), cfg.c_min, cfg.c_max, cfg.select,
        cfg.peps_objective,
    )
    elapsed = (time.perf_counter() - t0) * 1000.0
    return elapsed, assignment, archives


def cmd_benchmark(cfg: ExperimentConfig) -> int:
    out = Path(cfg.out)
    (out / "runs").mkdir(parents=True, exist_ok=True)
    valid, test, _ = build_matrices(cfg)
    jobs = [(v, n, r) for r in range(cfg.repetitions) for n in cfg.n_list for v in cfg.variants]
    profiles = {n: cfg.profile(n) for n in cfg.n_list}

    def run_job(job):
        variant, n, rep = job
        return job, _timed_run(variant, valid, profiles[n], cfg)

    results, failures = {}, []

    def collect(job_iter):
        for job in job_iter:
            try:
                key, res = run_job(job)
                results[key] = res
            except Exception as exc:  # reported, run continues
                failures.append((job, repr(exc)))
            else:
                v, n, r = job
                print(f"{v:>4} n={n:<5} rep={r}  {res[0]:9.2f} ms  mean loss {res[1].mean_loss:.4f}",
                      file=sys.stderr)

    if cfg.parallel and cfg.repetitions > 1:
        by_rep = [[j for j in jobs if j[2] == r] for r in range(cfg.repetitions)]
        with ThreadPoolExecutor(max_workers=cfg.repetitions) as ex:
            list(ex.map(collect, by_rep))
    else:
        collect(jobs)

    rows, runs = [], []
    for job in jobs:
        if job not in results:
            continue
        variant, n, rep = job
        elapsed, assignment, archives = results[job]
        l = statistics.fmean(len(a) for a in archives)
        row = {
            "variant": variant, "n": n, "rep": rep, "time_ms": round(elapsed, 3),
            "mean_loss": assignment.mean_loss, "max_loss": assignment.max_loss,
            "archive_size": round(l, 3),
        }
        rows.append(row)
        run = dict(row)
        if test is not None:
            run["test_mean_loss"] = float(_test_losses(assignment, test).mean())
        runs.append(run)
        if rep == 0:
            stem = out / "runs" / f"{variant}_n{n}"
            (stem.parent / f"{stem.name}_assignment.json").write_text(assignment.dumps())
            if variant != "peps":
                (stem.parent / f"{stem.name}_archive.json").write_text(archives[0].dumps())

    with (out / "results.csv").open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RESULTS_HEADER, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)

    timing = []
    for variant in cfg.variants:
        for n in cfg.n_list:
            ts = [r["time_ms"] for r in rows if r["variant"] == variant and r["n"] == n]
            if ts:
                sd = statistics.stdev(ts) if len(ts) > 1 else 0.0
                timing.append({"variant": variant, "n": n, "mean_ms": statistics.fmean(ts), "std_ms": sd})
    meta = asdict(cfg)
    del meta["out"]
    meta.update(m_effective=valid.m, v_validation=valid.v)
    report = {"config": meta, "runs": runs, "timing": timing,
              "failures": [{"job": list(j), "error": e} for j, e in failures]}
    (out / "report.json").write_text(json.dumps(report, indent=1))
    print(f"wrote {out / 'results.csv'} and {out / 'report.json'}")
    for job, err in failures:
        print(f"FAILED {job}: {err}", file=sys.stderr)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perprune", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def data_flags(p):
        g = p.add_argument_group("data and pool")
        g.add_argument("--data", help="CSV file with features and a label column")
        g.add_argument("--synthetic", default="4944,43,6", metavar="R,A,K",
                       help="synthetic rows,attributes,classes (used when --data is absent)")
        g.add_argument("--label-col", default="-1", help="label column name or zero-based index")
        g.add_argument("--no-header", action="store_true", help="CSV has no header row")
        g.add_argument("--split", default="0.6,0.2,0.2")
        g.add_argument("--split-seed", type=int, default=0)
        g.add_argument("--stratify", action="store_true", help="stratify the split by class")
        g.add_argument("--m", type=int, default=20, help="pool size")
        g.add_argument("--max-depth", type=int, default=8)
        g.add_argument("--min-leaf", type=int, default=2)
        g.add_argument("--pool-seed", type=int, default=0)
        g.add_argument("--out", default="out", help="output directory")

    def prune_flags(p, variant_default, n_default, n_help):
        p.add_argument("--matrix", help="validation prediction-matrix CSV (skips training)")
        p.add_argument("--test-matrix", help="test prediction-matrix CSV")
        g = p.add_argument_group("solver and participants")
        g.add_argument("--iterations", type=int, default=80)
        g.add_argument("--solver-seed", type=int, default=0)
        g.add_argument("--variant", default=variant_default)
        g.add_argument("--n", default=n_default, help=n_help)
        g.add_argument("--alphas", help="explicit comma-separated trade-off levels")
        g.add_argument("--alpha-range", default="0.01,0.2", metavar="LOW,HIGH")
        g.add_argument("--alpha-seed", type=int, default=0)
        g.add_argument("--cmin", type=float, default=0.3)
        g.add_argument("--cmax", type=float, default=1.7)
        g.add_argument("--select", choices=("sorted", "exact"), default="sorted")
        g.add_argument("--peps-objective", choices=("plain", "combined"), default="plain",
                       help="per-participant baseline search: (E, cost) or E + alpha*cost")

    p = sub.add_parser("train", help="train the bagged pool and write prediction matrices")
    data_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("prune", help="personalized pruning for one participant set")
    data_flags(p)
    prune_flags(p, "bf", None, "participant count (default 10)")
    p.set_defaults(func=cmd_prune)

    p = sub.add_parser("benchmark", help="sweep participant counts over BF, OMF and PEPs")
    data_flags(p)
    prune_flags(p, ",".join(VARIANTS), None, "comma-separated participant counts")
    p.add_argument("--repetitions", type=int, default=1)
    p.add_argument("--parallel", action="store_true", help="run repetitions concurrently")
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return args.func(cfg)
    except (ValueError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
