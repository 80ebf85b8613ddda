"""CVT niches and the one-elite-per-niche archive."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import DimensionMismatch, EmptyArchive, InvalidBounds
from .genome import ScoredSolution, validate

DEFAULT_MAX_ITERS = 100
DEFAULT_TOL = 1e-6


def check_bounds(bounds) -> np.ndarray:
    b = np.array(bounds, dtype=np.float64)
    if b.ndim != 2 or b.shape[1] != 2 or b.shape[0] < 1:
        raise InvalidBounds(f"bounds must be a (D, 2) array, got shape {b.shape}")
    if not np.isfinite(b).all() or (b[:, 0] >= b[:, 1]).any():
        raise InvalidBounds("every dimension needs finite lo < hi")
    return b


@dataclass(frozen=True, eq=False)
class CentroidSet:
    centroids: np.ndarray
    bounds: np.ndarray

    def __post_init__(self):
        c = np.array(self.centroids, dtype=np.float64)
        if c.ndim != 2 or c.shape[0] < 1:
            raise ValueError("centroids must be a non-empty (k, D) array")
        c.flags.writeable = False
        object.__setattr__(self, "centroids", c)
        object.__setattr__(self, "bounds", check_bounds(self.bounds))

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]


def quantization_error(samples: np.ndarray, centroids: np.ndarray) -> float:
    """Mean squared distance from each sample to its nearest centroid."""
    d, _ = cKDTree(centroids).query(samples, k=1)
    return float(np.mean(d ** 2))


def lloyd(samples, k, rng, max_iters=DEFAULT_MAX_ITERS, tol=DEFAULT_TOL):
    """Lloyd's k-means on ``samples`` with random-subset initialization.

    Returns ``(centroids, errors)`` where ``errors[t]`` is the quantization
    error of the centroids after iteration ``t`` (``errors[0]`` is the
    initial subset).
    """
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.shape[0]
    if k < 1 or n < k:
        raise ValueError(f"need 1 <= k <= samples, got k={k}, samples={n}")
    centroids = samples[np.sort(rng.choice(n, size=k, replace=False))].copy()

    dist, labels = cKDTree(centroids).query(samples, k=1)
    errors = [float(np.mean(dist ** 2))]
    for _ in range(max_iters):
        counts = np.bincount(labels, minlength=k)
        sums = np.zeros_like(centroids)
        np.add.at(sums, labels, samples)
        new = centroids.copy()
        filled = counts > 0
        new[filled] = sums[filled] / counts[filled, None]
        # empty cell: move its centroid onto the worst-served sample
        for j in np.flatnonzero(~filled):
            far = int(np.argmax(dist))
            new[j] = samples[far]
            dist[far] = 0.0
        shift = float(np.max(np.linalg.norm(new - centroids, axis=1)))
        centroids = new
        dist, labels = cKDTree(centroids).query(samples, k=1)
        errors.append(float(np.mean(dist ** 2)))
        if shift < tol:
            break
    return centroids, errors


def build_centroids(k, samples, bounds, seed, max_iters=DEFAULT_MAX_ITERS,
                    tol=DEFAULT_TOL) -> CentroidSet:
    """Draw ``samples`` uniform points inside ``bounds`` and run Lloyd's k-means."""
    from .rng import CVT, stream

    b = check_bounds(bounds)
    if k < 1 or samples < k:
        raise ValueError(f"need 1 <= k <= samples, got k={k}, samples={samples}")
    rng = stream(seed, CVT)
    points = rng.uniform(b[:, 0], b[:, 1], size=(samples, b.shape[0]))
    centroids, _ = lloyd(points, k, rng, max_iters=max_iters, tol=tol)
    return CentroidSet(centroids, b)


def nearest_centroid(descriptor, centroid_set: CentroidSet) -> int:
    """Index of the closest centroid, lowest index on ties."""
    x = np.asarray(descriptor, dtype=np.float64)
    if x.shape != (centroid_set.dim,):
        raise DimensionMismatch(
            f"descriptor has shape {x.shape}, centroids are {centroid_set.dim}-D")
    diff = centroid_set.centroids - x
    # np.argmin returns the first minimum
    return int(np.argmin(np.einsum("ij,ij->i", diff, diff)))


class Outcome(enum.Enum):
    INSERTED = "inserted"
    REPLACED = "replaced"
    DISCARDED = "discarded"


@dataclass(frozen=True)
class InsertResult:
    outcome: Outcome
    cell: int
    old_fitness: float | None = None

    @property
    def added(self) -> bool:
        return self.outcome is not Outcome.DISCARDED


class CvtArchive:
    """Fixed-size archive holding at most one elite per Voronoi cell."""

    def __init__(self, centroid_set: CentroidSet, genotype_dim: int):
        self.centroid_set = centroid_set
        self.genotype_dim = int(genotype_dim)
        self._cells: list[ScoredSolution | None] = [None] * centroid_set.k
        self._fitness = np.full(centroid_set.k, -np.inf)
        self._occupied: list[int] = []

    @property
    def k(self) -> int:
        return self.centroid_set.k

    @property
    def dims(self) -> tuple[int, int]:
        return self.genotype_dim, self.centroid_set.dim

    def __len__(self) -> int:
        return len(self._occupied)

    def __getitem__(self, cell: int) -> ScoredSolution | None:
        return self._cells[cell]

    def occupied_cells(self) -> list[int]:
        return sorted(self._occupied)

    def elites(self) -> list[tuple[int, ScoredSolution]]:
        return [(j, self._cells[j]) for j in self.occupied_cells()]

    def fitnesses(self) -> np.ndarray:
        """Fitness of each occupied cell, in cell order."""
        return self._fitness[self.occupied_cells()].copy()

    def genotypes(self) -> np.ndarray:
        cells = self.occupied_cells()
        if not cells:
            return np.empty((0, self.genotype_dim))
        return np.stack([self._cells[j].genotype for j in cells])

    def try_insert(self, candidate: ScoredSolution) -> InsertResult:
        validate(candidate, self.dims)
        cell = nearest_centroid(candidate.descriptor, self.centroid_set)
        current = self._cells[cell]
        if current is None:
            self._cells[cell] = candidate
            self._fitness[cell] = candidate.fitness
            self._occupied.append(cell)
            return InsertResult(Outcome.INSERTED, cell)
        if candidate.fitness > current.fitness:
            self._cells[cell] = candidate
            self._fitness[cell] = candidate.fitness
            return InsertResult(Outcome.REPLACED, cell, current.fitness)
        return InsertResult(Outcome.DISCARDED, cell, current.fitness)

    def sample_elites(self, count: int, rng: np.random.Generator) -> list[ScoredSolution]:
        """Draw ``count`` elites uniformly with replacement over occupied cells."""
        if not self._occupied:
            raise EmptyArchive("cannot sample from an empty archive")
        cells = self.occupied_cells()
        picks = rng.integers(0, len(cells), size=count)
        return [self._cells[cells[p]] for p in picks]


def sample_elites(archive: CvtArchive, count: int, rng) -> list[ScoredSolution]:
    return archive.sample_elites(count, rng)


def try_insert(archive: CvtArchive, candidate: ScoredSolution) -> InsertResult:
    return archive.try_insert(candidate)
