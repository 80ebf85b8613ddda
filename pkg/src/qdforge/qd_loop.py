"""Generational CVT-MAP-Elites driver."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis
from .archive import (DEFAULT_MAX_ITERS, DEFAULT_TOL, CentroidSet, CvtArchive, Outcome,
                      build_centroids)
from .errors import ValidationError
from .genome import ScoredSolution
from .rng import RunStreams
from .serialize import write_archive_jsonl, write_metrics_csv
from .tasks import Task, make_task
from .variation import OperatorKind, VariationOperator, vary

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    task: str = "arm"
    operator: VariationOperator = field(
        default_factory=lambda: VariationOperator(OperatorKind.ISO_LINE_CROSS))
    generations: int = 4000
    batch_size: int = 256
    centroids: int = 1024
    cvt_samples: int = 50000
    seed: int = 0
    initial_population_size: int | None = None
    task_params: dict = field(default_factory=dict)
    cvt_seed: int = 0
    cvt_max_iters: int = DEFAULT_MAX_ITERS
    cvt_tol: float = DEFAULT_TOL

    def __post_init__(self):
        for name, low in (("generations", 0), ("batch_size", 1), ("centroids", 1),
                          ("cvt_samples", 1), ("seed", 0), ("cvt_seed", 0),
                          ("cvt_max_iters", 0)):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < low:
                raise ValidationError(name, f"{name} must be an integer >= {low}")
        if self.cvt_samples < self.centroids:
            raise ValidationError("cvt_samples", "cvt_samples must be >= centroids")
        if self.initial_population_size is None:
            object.__setattr__(self, "initial_population_size", self.batch_size)
        elif (isinstance(self.initial_population_size, bool)
              or not isinstance(self.initial_population_size, (int, np.integer))
              or self.initial_population_size < 1):
            raise ValidationError("initial_population_size",
                                  "initial_population_size must be an integer >= 1")
        if not self.cvt_tol >= 0:
            raise ValidationError("cvt_tol", "cvt_tol must be >= 0")

    def make_task(self) -> Task:
        return make_task(self.task, self.task_params)

    def as_dict(self) -> dict:
        return {
            "task": self.task,
            "task_params": dict(self.task_params),
            "operator": self.operator.name,
            **self.operator.effective_params(),
            "generations": self.generations,
            "batch_size": self.batch_size,
            "centroids": self.centroids,
            "cvt_samples": self.cvt_samples,
            "cvt_seed": self.cvt_seed,
            "cvt_max_iters": self.cvt_max_iters,
            "cvt_tol": self.cvt_tol,
            "seed": self.seed,
            "initial_population_size": self.initial_population_size,
        }


@dataclass
class GenerationReport:
    generation: int
    offspring_evaluated: int
    offspring_added: int
    qd_score_added: float
    snapshot: Path | None = None


@dataclass
class RunResult:
    archive: CvtArchive
    metrics: list[analysis.MetricsRecord]
    reports: list[GenerationReport]
    initial_qd_score: float
    min_fitness: float


def centroids_for(config: RunConfig, task: Task) -> CentroidSet:
    return build_centroids(config.centroids, config.cvt_samples, task.bounds,
                           config.cvt_seed, config.cvt_max_iters, config.cvt_tol)


def _insert_batch(archive, task, genotypes):
    """Evaluate ``genotypes`` and insert them in order; return (added, qd gain)."""
    fitness, descriptors = task.evaluate_batch(genotypes)
    added = 0
    gained = 0.0
    for g, f, d in zip(genotypes, fitness, descriptors):
        result = archive.try_insert(ScoredSolution(g, f, d))
        if result.outcome is Outcome.INSERTED:
            gained += f - task.min_fitness
        elif result.outcome is Outcome.REPLACED:
            gained += f - result.old_fitness
        else:
            continue
        added += 1
    return added, gained


def initialize(config: RunConfig, task: Task, streams: RunStreams,
               centroid_set: CentroidSet | None = None) -> CvtArchive:
    if centroid_set is None:
        centroid_set = centroids_for(config, task)
    archive = CvtArchive(centroid_set, task.genotype_dim)
    population = task.initial_genotypes(config.initial_population_size, streams.init())
    _insert_batch(archive, task, population)
    return archive


def make_offspring(archive, operator, batch_size, streams, generation) -> np.ndarray:
    """Select parent pairs and vary them; offspring i uses its own stream."""
    parents = archive.sample_elites(2 * batch_size, streams.selection(generation))
    children = [
        vary(operator, parents[i].genotype, parents[batch_size + i].genotype,
             streams.offspring(generation, i))
        for i in range(batch_size)
    ]
    return np.stack(children)


def step(archive: CvtArchive, config: RunConfig, task: Task, streams: RunStreams,
         generation: int) -> GenerationReport:
    children = make_offspring(archive, config.operator, config.batch_size, streams, generation)
    added, gained = _insert_batch(archive, task, children)
    return GenerationReport(generation, len(children), added, gained)


def metrics_record(archive, report: GenerationReport, min_fitness: float):
    return analysis.MetricsRecord(
        generation=report.generation,
        qd_score=analysis.qd_score(archive, min_fitness),
        coverage=analysis.coverage(archive),
        max_fitness=analysis.max_fitness(archive),
        offspring_added=report.offspring_added,
        qd_score_added=report.qd_score_added,
    )


def run(config: RunConfig, out_dir=None, snapshot_every: int = 0,
        centroid_set: CentroidSet | None = None) -> RunResult:
    """Initialize, then run ``config.generations`` steps.

    With ``out_dir`` set, writes ``metrics.csv``, ``archive_final.jsonl`` and,
    every ``snapshot_every`` generations, ``archive_gen_<g>.jsonl``.
    """
    task = config.make_task()
    streams = RunStreams(config.seed)
    archive = initialize(config, task, streams, centroid_set)
    initial_qd = analysis.qd_score(archive, task.min_fitness)
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    metrics, reports = [], []
    for gen in range(1, config.generations + 1):
        report = step(archive, config, task, streams, gen)
        if out is not None and snapshot_every and gen % snapshot_every == 0:
            report.snapshot = out / f"archive_gen_{gen}.jsonl"
            write_archive_jsonl(report.snapshot, archive)
        reports.append(report)
        metrics.append(metrics_record(archive, report, task.min_fitness))
        if gen % 500 == 0:
            log.debug("gen %d qd=%.4g cov=%.3f", gen, metrics[-1].qd_score, metrics[-1].coverage)

    if out is not None:
        write_metrics_csv(out / "metrics.csv", metrics)
        write_archive_jsonl(out / "archive_final.jsonl", archive)
    return RunResult(archive, metrics, reports, initial_qd, task.min_fitness)
