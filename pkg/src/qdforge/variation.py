"""Variation operators: Iso, Iso+LineDD and their discrete-crossover hybrids.

All operators draw from the generator they are handed, in a fixed order, so
a given (stream, parents, params) triple always produces the same child.
Draw order for the two-parent operators is::

    iso noise for child a (N normals), line scalar s (1 normal),
    iso noise for child b (N normals), mask gaps (K exponentials), u (1 uniform)

Child a is complete after the first two draws, which is why IsoLineCross with
``p_cross = 0`` replays Iso+LineDD exactly under the same stream.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ValidationError


class OperatorKind(enum.Enum):
    ISO = "iso"
    ISO_CROSS = "iso_cross"
    ISO_LINE_DD = "iso_line_dd"
    ISO_LINE_CROSS = "iso_line_cross"


@dataclass(frozen=True)
class OperatorParams:
    sigma_iso: float = 0.005
    sigma_line: float = 0.05
    lambda_cross: float = 0.1
    p_cross: float = 0.5

    def __post_init__(self):
        for name in ("sigma_iso", "sigma_line", "lambda_cross", "p_cross"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(name, f"{name} must be a number")
            if not math.isfinite(value):
                raise ValidationError(name, f"{name} must be finite")
            object.__setattr__(self, name, float(value))
        if self.sigma_iso < 0:
            raise ValidationError("sigma_iso", "sigma_iso must be >= 0")
        if self.sigma_line < 0:
            raise ValidationError("sigma_line", "sigma_line must be >= 0")
        if self.lambda_cross <= 0:
            raise ValidationError("lambda_cross", "lambda_cross must be > 0")
        if not 0.0 <= self.p_cross <= 1.0:
            raise ValidationError("p_cross", "p_cross must lie in [0, 1]")


@dataclass(frozen=True)
class VariationOperator:
    kind: OperatorKind
    params: OperatorParams = field(default_factory=OperatorParams)

    def __post_init__(self):
        object.__setattr__(self, "kind", OperatorKind(self.kind))

    @property
    def name(self) -> str:
        return self.kind.value

    def effective_params(self) -> dict:
        """The parameters this kind actually reads (others are ignored)."""
        p = self.params
        if self.kind is OperatorKind.ISO:
            return {"sigma_iso": p.sigma_iso}
        if self.kind is OperatorKind.ISO_LINE_DD:
            return {"sigma_iso": p.sigma_iso, "sigma_line": p.sigma_line}
        if self.kind is OperatorKind.ISO_CROSS:
            return {"sigma_iso": p.sigma_iso, "sigma_line": 0.0,
                    "lambda_cross": p.lambda_cross, "p_cross": p.p_cross}
        return {"sigma_iso": p.sigma_iso, "sigma_line": p.sigma_line,
                "lambda_cross": p.lambda_cross, "p_cross": p.p_cross}


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"parents have shapes {a.shape} and {b.shape}")
    return a, b


def iso_mutate(parent, sigma_iso, rng):
    parent = np.asarray(parent, dtype=np.float64)
    return parent + sigma_iso * rng.standard_normal(parent.shape)


def line_dd_mutate(parent_i, parent_j, sigma_iso, sigma_line, rng):
    """Iso noise plus a step along (parent_j - parent_i) scaled by one shared normal."""
    parent_i, parent_j = _pair(parent_i, parent_j)
    noise = rng.standard_normal(parent_i.shape)
    s = rng.standard_normal()
    return parent_i + sigma_iso * noise + sigma_line * (parent_j - parent_i) * s


def num_events(n: int, lambda_cross: float) -> int:
    return max(1, math.floor(lambda_cross * n))


def mask_from_gaps(n: int, gaps) -> np.ndarray:
    """Crossover mask for genotype length ``n`` from explicit inter-event gaps.

    Event positions are the cumulative gaps rescaled so the last one lands on
    gene ``n - 1``; a gene takes parent a (bit 1) while an even number of
    events sit at or before it. Positions are 0-based and duplicates are kept.
    """
    gaps = np.asarray(gaps, dtype=np.float64)
    c = np.cumsum(gaps)
    z = np.floor(c / c[-1] * (n - 1)).astype(np.int64)
    # count of events with z_i <= j, for every gene j
    crossings = np.cumsum(np.bincount(z, minlength=n)[:n])
    return (1 - crossings % 2).astype(np.int8)


def generate_mask(n: int, lambda_cross: float, rng) -> np.ndarray:
    if n < 1:
        raise ValueError("genotype length must be >= 1")
    if not lambda_cross > 0:
        raise ValueError("lambda_cross must be > 0")
    gaps = rng.standard_exponential(num_events(n, lambda_cross))
    return mask_from_gaps(n, gaps)


def crossover(a, b, mask):
    a, b = _pair(a, b)
    mask = np.asarray(mask)
    if mask.shape != a.shape:
        raise DimensionMismatch(f"mask has shape {mask.shape}, parents {a.shape}")
    return np.where(mask == 1, a, b)


def vary(op: VariationOperator, parent_i, parent_j, rng):
    """Produce one child from a parent pair (parent_j is unused by Iso)."""
    p = op.params
    if op.kind is OperatorKind.ISO:
        return iso_mutate(parent_i, p.sigma_iso, rng)
    if op.kind is OperatorKind.ISO_LINE_DD:
        return line_dd_mutate(parent_i, parent_j, p.sigma_iso, p.sigma_line, rng)

    sigma_line = 0.0 if op.kind is OperatorKind.ISO_CROSS else p.sigma_line
    parent_i, parent_j = _pair(parent_i, parent_j)
    n = parent_i.shape[0]
    step = sigma_line * (parent_j - parent_i)
    noise_a = rng.standard_normal(n)
    s = rng.standard_normal()
    child_a = parent_i + p.sigma_iso * noise_a + step * s
    noise_b = rng.standard_normal(n)
    child_b = parent_j + p.sigma_iso * noise_b - step * s
    mask = generate_mask(n, p.lambda_cross, rng)
    if rng.random() < p.p_cross:
        return crossover(child_a, child_b, mask)
    return child_a
