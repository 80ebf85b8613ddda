"""Archive metrics, rolling offspring statistics and genotype-space PCA."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DegenerateData, EmptyArchive
from .linalg import jacobi_eigenvalues

METRIC_FIELDS = ("generation", "qd_score", "coverage", "max_fitness",
                 "offspring_added", "qd_score_added")


@dataclass(frozen=True)
class MetricsRecord:
    generation: int
    qd_score: float
    coverage: float
    max_fitness: float
    offspring_added: int
    qd_score_added: float

    def as_row(self) -> list:
        return [getattr(self, f) for f in METRIC_FIELDS]


@dataclass(frozen=True)
class EffectiveDimReport:
    num_components: int
    variance_fractions: np.ndarray
    threshold: float = 0.95

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.variance_fractions)


def qd_score(archive, min_fitness: float) -> float:
    """Sum of (fitness - min_fitness) over occupied cells."""
    f = archive.fitnesses()
    return float(np.sum(f - min_fitness)) if f.size else 0.0


def coverage(archive) -> float:
    return len(archive) / archive.k


def max_fitness(archive) -> float:
    if len(archive) == 0:
        raise EmptyArchive("max_fitness of an empty archive")
    return float(np.max(archive.fitnesses()))


def rolling_stats(offspring_added, qd_score_added, window: int = 500):
    """Trailing-window offspring statistics.

    Returns ``(mean_added, qd_per_offspring)``. The first is the mean of
    ``offspring_added`` over the last ``window`` generations (fewer during
    warm-up). The second is the windowed sum of ``qd_score_added`` over the
    windowed sum of ``offspring_added``, or 0 where nothing was added.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    added = np.asarray(offspring_added, dtype=np.float64)
    gained = np.asarray(qd_score_added, dtype=np.float64)
    if added.shape != gained.shape:
        raise ValueError("series must have equal length")
    if added.size == 0:
        return np.empty(0), np.empty(0)
    # left-pad with zeros so every generation sees a full-width window
    pad = np.zeros(window - 1)
    added_sum = sliding_window_view(np.concatenate([pad, added]), window).sum(axis=1)
    gained_sum = sliding_window_view(np.concatenate([pad, gained]), window).sum(axis=1)
    span = np.minimum(np.arange(1, added.size + 1), window)
    mean_added = added_sum / span
    per_offspring = np.divide(gained_sum, added_sum, out=np.zeros_like(gained_sum),
                              where=added_sum > 0)
    return mean_added, per_offspring


def rolling_stats_from_reports(reports, window: int = 500):
    return rolling_stats([r.offspring_added for r in reports],
                         [r.qd_score_added for r in reports], window)


def covariance_spectrum(genotypes) -> np.ndarray:
    """Eigenvalues of the sample covariance of the rows of ``genotypes``.

    Uses the M x M Gram matrix when there are fewer samples than genes; its
    non-zero eigenvalues are the covariance's. Tiny negative round-off is
    clipped to zero.
    """
    x = np.asarray(genotypes, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need at least two genotypes in an (M, N) array")
    m, n = x.shape
    centered = x - x.mean(axis=0)
    if m < n:
        gram = centered @ centered.T / (m - 1)
    else:
        gram = centered.T @ centered / (m - 1)
    eigenvalues, _ = jacobi_eigenvalues(gram)
    return np.clip(eigenvalues, 0.0, None)


def effective_dimensionality(genotypes, threshold: float = 0.95) -> EffectiveDimReport:
    """Number of principal components needed to explain ``threshold`` of the variance."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    eigenvalues = covariance_spectrum(genotypes)
    total = eigenvalues.sum()
    if not total > 0.0:
        raise DegenerateData("all genotypes are identical; total variance is zero")
    fractions = eigenvalues / total
    cumulative = np.cumsum(fractions)
    # guard the comparison against last-bit round-off in the running sum
    count = int(np.searchsorted(cumulative, threshold - 1e-12, side="left")) + 1
    return EffectiveDimReport(min(count, fractions.size), fractions, threshold)
