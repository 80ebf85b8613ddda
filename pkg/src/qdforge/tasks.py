"""Desk-scale evaluation tasks mapping genotypes to (fitness, descriptor).

Every task evaluates whole batches with one code path; the single-genotype
``evaluate`` is a batch of one, so batched and one-off results are the same
bits.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .genome import clamp_descriptor

RASTRIGIN_LIMIT = 5.12


class Task:
    """Base class. Subclasses set the class attributes and ``_evaluate_batch``."""

    name: str = ""
    genotype_dim: int
    descriptor_dim: int = 2
    bounds: np.ndarray
    min_fitness: float

    @property
    def dims(self) -> tuple[int, int]:
        return self.genotype_dim, self.descriptor_dim

    def initial_genotypes(self, count: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def _evaluate_batch(self, genotypes: np.ndarray):
        raise NotImplementedError

    def evaluate_batch(self, genotypes) -> tuple[np.ndarray, np.ndarray]:
        """Return (fitness of shape (B,), descriptors of shape (B, D))."""
        g = np.asarray(genotypes, dtype=np.float64)
        if g.ndim != 2 or g.shape[1] != self.genotype_dim:
            raise DimensionMismatch(
                f"{self.name} expects genotypes of length {self.genotype_dim}, "
                f"got shape {g.shape}")
        fitness, desc = self._evaluate_batch(np.ascontiguousarray(g))
        return fitness, clamp_descriptor(desc, self.bounds)

    def evaluate(self, genotype) -> tuple[float, np.ndarray]:
        g = np.asarray(genotype, dtype=np.float64)
        if g.ndim != 1:
            raise DimensionMismatch("evaluate takes a single flat genotype")
        fitness, desc = self.evaluate_batch(g[None, :])
        return float(fitness[0]), desc[0]

    def describe(self) -> dict:
        return {"task": self.name}


class ArmTask(Task):
    """Planar arm with ``n_links`` links of length 1/n and unit total reach.

    Descriptor is the end-effector position. Fitness is minus the variance
    of the joint angles, wrapped into [-pi, pi) first so the variance (and
    hence ``min_fitness = -pi**2``) stays bounded however far genes drift.
    """

    name = "arm"

    def __init__(self, n_links: int = 8, init_scale: float = 1.0):
        if int(n_links) != n_links or n_links < 1:
            raise ValidationError("n_links", "n_links must be an integer >= 1")
        if not init_scale > 0:
            raise ValidationError("init_scale", "init_scale must be > 0")
        self.n_links = int(n_links)
        self.init_scale = float(init_scale)
        self.genotype_dim = self.n_links
        self.bounds = np.array([[-1.0, 1.0], [-1.0, 1.0]])
        self.min_fitness = -math.pi ** 2

    def initial_genotypes(self, count, rng):
        half = math.pi / self.n_links * self.init_scale
        return rng.uniform(-half, half, size=(count, self.n_links))

    def _evaluate_batch(self, angles):
        return arm_fitness(angles), arm_end_effector(angles)

    def describe(self):
        return {"task": self.name, "n_links": self.n_links, "init_scale": self.init_scale}


def wrap_angles(angles):
    return np.mod(np.asarray(angles) + math.pi, 2 * math.pi) - math.pi


def arm_end_effector(angles) -> np.ndarray:
    angles = np.atleast_2d(np.asarray(angles, dtype=np.float64))
    n = angles.shape[1]
    cum = np.cumsum(angles, axis=1)
    x = np.sum(np.cos(cum), axis=1) / n
    y = np.sum(np.sin(cum), axis=1) / n
    return np.stack([x, y], axis=1)


def arm_fitness(angles) -> np.ndarray:
    angles = np.atleast_2d(np.asarray(angles, dtype=np.float64))
    return -np.var(wrap_angles(angles), axis=1)


class RastriginTask(Task):
    """Negated Rastrigin with the first two genes as descriptor.

    Genes are clamped to [-5.12, 5.12] before scoring so the declared lower
    bound ``-N * (5.12**2 + 20)`` holds for any genotype.
    """

    name = "rastrigin"

    def __init__(self, dims: int = 10):
        if int(dims) != dims or dims < 2:
            raise ValidationError("dims", "rastrigin needs dims >= 2")
        self.genotype_dim = int(dims)
        self.bounds = np.array([[-RASTRIGIN_LIMIT, RASTRIGIN_LIMIT]] * 2)
        self.min_fitness = -self.genotype_dim * (RASTRIGIN_LIMIT ** 2 + 20.0)

    def initial_genotypes(self, count, rng):
        return rng.uniform(-RASTRIGIN_LIMIT, RASTRIGIN_LIMIT, size=(count, self.genotype_dim))

    def _evaluate_batch(self, genotypes):
        x = np.clip(genotypes, -RASTRIGIN_LIMIT, RASTRIGIN_LIMIT)
        value = 10.0 * x.shape[1] + np.sum(x * x - 10.0 * np.cos(2 * math.pi * x), axis=1)
        return -value, genotypes[:, :2].copy()

    def describe(self):
        return {"task": self.name, "dims": self.genotype_dim}


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2 * math.pi * x)))


def mlp_param_count(widths, n_in: int = 2, n_out: int = 2) -> int:
    sizes = [n_in, *widths, n_out]
    return sum(a * b + b for a, b in zip(sizes[:-1], sizes[1:]))


class MlpPointTask(Task):
    """A tanh MLP steering a point mass around [-1, 1]^2.

    The network maps the current position to a velocity, which is clipped to
    unit norm and integrated for ``steps`` Euler steps of size ``dt`` from the
    origin. Descriptor: final position. Fitness: minus the mean squared
    velocity, so the lower bound is -1.
    """

    name = "mlp_point"

    def __init__(self, hidden=(16, 16), steps: int = 50, dt: float = 0.1,
                 init_std: float = 0.1):
        hidden = tuple(int(h) for h in hidden)
        if not hidden or min(hidden) < 1:
            raise ValidationError("hidden", "hidden widths must be positive")
        if int(steps) != steps or steps < 1:
            raise ValidationError("steps", "steps must be an integer >= 1")
        if not dt > 0:
            raise ValidationError("dt", "dt must be > 0")
        if not init_std >= 0:
            raise ValidationError("init_std", "init_std must be >= 0")
        self.hidden = hidden
        self.steps = int(steps)
        self.dt = float(dt)
        self.init_std = float(init_std)
        self.sizes = [2, *hidden, 2]
        self.genotype_dim = mlp_param_count(hidden)
        self.bounds = np.array([[-1.0, 1.0], [-1.0, 1.0]])
        self.min_fitness = -1.0

    def initial_genotypes(self, count, rng):
        return self.init_std * rng.standard_normal((count, self.genotype_dim))

    def unpack(self, genotypes):
        """Split (B, N) flat weights into per-layer (W, b) with W of shape (B, in, out)."""
        layers = []
        offset = 0
        batch = genotypes.shape[0]
        for n_in, n_out in zip(self.sizes[:-1], self.sizes[1:]):
            w = genotypes[:, offset:offset + n_in * n_out].reshape(batch, n_in, n_out)
            offset += n_in * n_out
            b = genotypes[:, offset:offset + n_out]
            offset += n_out
            layers.append((w, b))
        return layers

    def _evaluate_batch(self, genotypes):
        layers = self.unpack(genotypes)
        batch = genotypes.shape[0]
        pos = np.zeros((batch, 2))
        energy = np.zeros(batch)
        for _ in range(self.steps):
            h = pos
            for i, (w, b) in enumerate(layers):
                h = np.einsum("bi,bio->bo", h, w) + b
                if i < len(layers) - 1:
                    h = np.tanh(h)
            speed_sq = np.sum(h * h, axis=1)
            scale = np.where(speed_sq > 1.0, 1.0 / np.sqrt(np.maximum(speed_sq, 1.0)), 1.0)
            vel = h * scale[:, None]
            # squared speed of the clipped velocity, exactly capped at 1
            energy += np.minimum(speed_sq, 1.0)
            pos = np.clip(pos + self.dt * vel, -1.0, 1.0)
        return -energy / self.steps, pos

    def describe(self):
        return {"task": self.name, "hidden": list(self.hidden), "steps": self.steps,
                "dt": self.dt, "init_std": self.init_std}


TASKS = {"arm": ArmTask, "rastrigin": RastriginTask, "mlp_point": MlpPointTask}

TASK_PARAMS = {
    "arm": {"n_links", "init_scale"},
    "rastrigin": {"dims"},
    "mlp_point": {"hidden", "steps", "dt", "init_std"},
}


def make_task(name: str, params: dict | None = None) -> Task:
    if name not in TASKS:
        raise ValidationError("task", f"unknown task {name!r}; choose from {sorted(TASKS)}")
    params = dict(params or {})
    unknown = set(params) - TASK_PARAMS[name]
    if unknown:
        raise ValidationError(sorted(unknown)[0], f"unknown {name} parameter(s): {sorted(unknown)}")
    return TASKS[name](**params)


_default_tasks: dict[tuple, Task] = {}


def _default(name, **params):
    key = (name, tuple(sorted(params.items())))
    if key not in _default_tasks:
        _default_tasks[key] = make_task(name, params)
    return _default_tasks[key]


def evaluate_arm(genotype):
    """Evaluate joint angles on an arm with ``len(genotype)`` links."""
    g = np.asarray(genotype, dtype=np.float64)
    return _default("arm", n_links=g.size).evaluate(g)


def evaluate_rastrigin_proj(genotype):
    g = np.asarray(genotype, dtype=np.float64)
    return _default("rastrigin", dims=g.size).evaluate(g)


def evaluate_mlp_point(genotype, hidden=(16, 16), steps=50, dt=0.1):
    return _default("mlp_point", hidden=tuple(hidden), steps=steps, dt=dt).evaluate(genotype)
