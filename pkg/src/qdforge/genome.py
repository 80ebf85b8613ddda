"""Core value types: genotypes, descriptors and scored solutions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFiniteValue


def clamp_descriptor(values, bounds) -> np.ndarray:
    """Clamp a descriptor (or a batch of them) into per-dimension bounds.

    ``bounds`` is a (D, 2) array of [lo, hi] rows.
    """
    bounds = np.asarray(bounds, dtype=np.float64)
    return np.clip(np.asarray(values, dtype=np.float64), bounds[:, 0], bounds[:, 1])


@dataclass(frozen=True, eq=False)
class ScoredSolution:
    """An evaluated genotype: what an archive cell stores."""

    genotype: np.ndarray
    fitness: float
    descriptor: np.ndarray

    def __post_init__(self):
        g = np.array(self.genotype, dtype=np.float64).reshape(-1)
        d = np.array(self.descriptor, dtype=np.float64).reshape(-1)
        g.flags.writeable = False
        d.flags.writeable = False
        object.__setattr__(self, "genotype", g)
        object.__setattr__(self, "descriptor", d)
        object.__setattr__(self, "fitness", float(self.fitness))


def validate(solution: ScoredSolution, task_dims: tuple[int, int]) -> None:
    """Check a solution against a task's (genotype_dim, descriptor_dim).

    Returns None when the solution is well formed; raises
    DimensionMismatch or NonFiniteValue otherwise.
    """
    n, d = task_dims
    if solution.genotype.shape != (n,):
        raise DimensionMismatch(
            f"genotype has {solution.genotype.size} genes, task expects {n}")
    if solution.descriptor.shape != (d,):
        raise DimensionMismatch(
            f"descriptor has {solution.descriptor.size} values, task expects {d}")
    if not np.isfinite(solution.genotype).all():
        raise NonFiniteValue("genotype contains NaN or Inf")
    if not np.isfinite(solution.descriptor).all():
        raise NonFiniteValue("descriptor contains NaN or Inf")
    if not np.isfinite(solution.fitness):
        raise NonFiniteValue("fitness is not finite")
