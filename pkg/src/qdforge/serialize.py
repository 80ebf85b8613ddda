"""File formats: metrics CSV, archive JSON-lines, centroid CSV.

Floats are written with ``repr`` so every file round-trips bit-exactly and two
identical runs produce identical bytes.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .analysis import METRIC_FIELDS, MetricsRecord
from .archive import CentroidSet


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_metrics_csv(path, records) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(METRIC_FIELDS)
        for rec in records:
            writer.writerow([_fmt(v) for v in rec.as_row()])


def read_metrics_csv(path) -> list[MetricsRecord]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        MetricsRecord(
            generation=int(r["generation"]),
            qd_score=float(r["qd_score"]),
            coverage=float(r["coverage"]),
            max_fitness=float(r["max_fitness"]),
            offspring_added=int(r["offspring_added"]),
            qd_score_added=float(r["qd_score_added"]),
        )
        for r in rows
    ]


def archive_records(archive):
    centroids = archive.centroid_set.centroids
    for cell, sol in archive.elites():
        yield {
            "cell_index": cell,
            "centroid": centroids[cell].tolist(),
            "fitness": sol.fitness,
            "descriptor": sol.descriptor.tolist(),
            "genotype": sol.genotype.tolist(),
        }


def write_archive_jsonl(path, archive) -> None:
    with open(path, "w") as fh:
        for rec in archive_records(archive):
            fh.write(json.dumps(rec) + "\n")


def read_archive_jsonl(path) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


def write_centroids_csv(path, centroid_set: CentroidSet) -> None:
    d = centroid_set.dim
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"c{i}" for i in range(d)])
        for row in centroid_set.centroids:
            writer.writerow([repr(float(v)) for v in row])


def read_centroids_csv(path, bounds) -> CentroidSet:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        rows = [[float(v) for v in row] for row in reader if row]
    return CentroidSet(np.array(rows), bounds)


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
