"""Command-line entry point: ``run``, ``analyze`` and ``centroids``.

    qdforge run CONFIG [--out DIR] [--jobs N] [--snapshot-every G]
    qdforge analyze RUN_DIR [--window W]
    qdforge centroids K TASK [--out DIR] [--cvt-samples S] [--cvt-seed S]

``QDFORGE_SEED_OFFSET`` (integer) is added to every run seed.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analysis
from .archive import CentroidSet, build_centroids
from .config import ExperimentSpec, parse_config
from .errors import DegenerateData, QDError
from .qd_loop import RunConfig, run
from .serialize import (read_archive_jsonl, read_centroids_csv, read_metrics_csv,
                        write_centroids_csv, write_json)
from .tasks import make_task

log = logging.getLogger("qdforge")

SEED_OFFSET_ENV = "QDFORGE_SEED_OFFSET"


def run_dir_for(out_dir, cfg: RunConfig) -> Path:
    return Path(out_dir) / cfg.task / cfg.operator.name / f"seed_{cfg.seed}"


def centroid_cache_name(task: str, k: int, samples: int, seed: int,
                        max_iters: int = 100, tol: float = 1e-6) -> str:
    return f"{task}_k{k}_n{samples}_seed{seed}_it{max_iters}_tol{tol!r}.csv"


def cached_centroids(cache_dir, cfg: RunConfig) -> CentroidSet:
    """Load the centroid set for ``cfg`` from ``cache_dir``, building it if absent."""
    bounds = make_task(cfg.task, cfg.task_params).bounds
    path = Path(cache_dir) / centroid_cache_name(
        cfg.task, cfg.centroids, cfg.cvt_samples, cfg.cvt_seed, cfg.cvt_max_iters, cfg.cvt_tol)
    if path.exists():
        return read_centroids_csv(path, bounds)
    cs = build_centroids(cfg.centroids, cfg.cvt_samples, bounds, cfg.cvt_seed,
                         cfg.cvt_max_iters, cfg.cvt_tol)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_centroids_csv(path, cs)
    return cs


def _execute(cfg: RunConfig, run_dir: Path, snapshot_every: int,
             centroid_set: CentroidSet | None, config_hash: str) -> dict:
    start = time.perf_counter()
    entry = {"path": str(run_dir), "task": cfg.task, "operator": cfg.operator.name,
             "seed": cfg.seed, "config_hash": config_hash}
    try:
        run_dir.mkdir(parents=True, exist_ok=True)
        run(cfg, out_dir=run_dir, snapshot_every=snapshot_every, centroid_set=centroid_set)
        entry["status"] = "ok"
    except Exception as exc:  # recorded, the sweep keeps going
        entry["status"] = "failed"
        entry["error"] = f"{type(exc).__name__}: {exc}"
        log.error("run %s failed: %s", run_dir, entry["error"])
        log.debug("%s", traceback.format_exc())
    entry["wall_time_s"] = time.perf_counter() - start
    manifest = {**entry, "run_config": cfg.as_dict()}
    try:
        write_json(run_dir / "manifest.json", manifest)
    except OSError:
        pass
    return entry


def run_sweep(spec: ExperimentSpec, jobs: int = 1, seed_offset: int = 0) -> int:
    """Execute every run of ``spec``; return 0 iff all of them completed."""
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runs = [replace(cfg, seed=cfg.seed + seed_offset) for cfg in spec.runs]

    # one centroid set per niche definition, shared by every operator and seed
    centroid_sets: dict[tuple, CentroidSet | None] = {}
    for cfg in runs:
        key = (cfg.task, cfg.centroids, cfg.cvt_samples, cfg.cvt_seed, cfg.cvt_max_iters, cfg.cvt_tol)
        if key not in centroid_sets:
            try:
                centroid_sets[key] = cached_centroids(out / "_centroids", cfg)
            except QDError as exc:
                log.error("cannot build centroids for %s: %s", cfg.task, exc)
                centroid_sets[key] = None

    jobs_list = [
        (cfg, run_dir_for(out, cfg), spec.snapshot_every,
         centroid_sets[(cfg.task, cfg.centroids, cfg.cvt_samples, cfg.cvt_seed,
                        cfg.cvt_max_iters, cfg.cvt_tol)],
         spec.config_hash)
        for cfg in runs
    ]
    if jobs > 1 and len(jobs_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_execute, *zip(*jobs_list)))
    else:
        entries = [_execute(*args) for args in jobs_list]

    failed = [e for e in entries if e["status"] != "ok"]
    write_json(out / "manifest.json", {
        "config_hash": spec.config_hash,
        "seed_offset": seed_offset,
        "runs": entries,
        "failed": len(failed),
    })
    return 1 if failed else 0


def analyze_run(run_dir, window: int = 500, threshold: float = 0.95) -> None:
    """Write analysis.csv and effective_dim.csv next to a run's metrics.csv."""
    run_dir = Path(run_dir)
    records = read_metrics_csv(run_dir / "metrics.csv")
    mean_added, per_offspring = analysis.rolling_stats(
        [r.offspring_added for r in records], [r.qd_score_added for r in records], window)
    with open(run_dir / "analysis.csv", "w") as fh:
        fh.write("generation,rolling_offspring_added,rolling_qd_score_added_per_offspring\n")
        for rec, a, q in zip(records, mean_added, per_offspring):
            fh.write(f"{rec.generation},{float(a)!r},{float(q)!r}\n")

    snapshots = sorted(run_dir.glob("archive_*.jsonl"), key=_snapshot_order)
    with open(run_dir / "effective_dim.csv", "w") as fh:
        fh.write("snapshot,elites,num_components,threshold\n")
        for path in snapshots:
            elites = read_archive_jsonl(path)
            genotypes = np.array([e["genotype"] for e in elites])
            try:
                count = analysis.effective_dimensionality(genotypes, threshold).num_components
            except (ValueError, DegenerateData):
                count = ""
            fh.write(f"{path.stem},{len(elites)},{count},{threshold!r}\n")


def _snapshot_order(path: Path):
    stem = path.stem
    if stem == "archive_final":
        return (1, 0)
    return (0, int(stem.rsplit("_", 1)[-1]))


def analyze(root, window: int = 500) -> list[Path]:
    root = Path(root)
    run_dirs = sorted(p.parent for p in root.rglob("metrics.csv"))
    for d in run_dirs:
        analyze_run(d, window)
    return run_dirs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdforge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run every experiment in a config file")
    p_run.add_argument("config_path", nargs="?", metavar="CONFIG")
    p_run.add_argument("--config", dest="config_flag", metavar="PATH")
    p_run.add_argument("--out", metavar="DIR")
    p_run.add_argument("--jobs", type=int, default=1, metavar="N")
    p_run.add_argument("--snapshot-every", type=int, metavar="G")

    p_an = sub.add_parser("analyze", help="rolling stats and PCA for finished runs")
    p_an.add_argument("run_dir")
    p_an.add_argument("--window", type=int, default=500)

    p_cvt = sub.add_parser("centroids", help="pre-compute a shared centroid set")
    p_cvt.add_argument("k", type=int)
    p_cvt.add_argument("task")
    p_cvt.add_argument("--out", default="runs/_centroids", metavar="DIR")
    p_cvt.add_argument("--cvt-samples", type=int, default=50000)
    p_cvt.add_argument("--cvt-seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            path = args.config_flag or args.config_path
            if not path:
                log.error("run needs a config path")
                return 2
            spec = parse_config(path)
            if args.out:
                spec.out_dir = Path(args.out)
            if args.snapshot_every is not None:
                spec.snapshot_every = args.snapshot_every
            offset = int(os.environ.get(SEED_OFFSET_ENV, "0"))
            return run_sweep(spec, jobs=max(1, args.jobs), seed_offset=offset)
        if args.command == "analyze":
            dirs = analyze(args.run_dir, args.window)
            if not dirs:
                log.error("no metrics.csv found under %s", args.run_dir)
                return 1
            return 0
        if args.command == "centroids":
            cfg = RunConfig(task=args.task, centroids=args.k, cvt_samples=args.cvt_samples,
                            cvt_seed=args.cvt_seed)
            cs = cached_centroids(args.out, cfg)
            log.info("%d centroids for %s in %s", cs.k, args.task, args.out)
            return 0
    except QDError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
