"""JSON experiment configs.

A config describes a grid of runs: every task x operator x seed. Scalars
may be given where a list is allowed. Omitted operator and experiment
parameters fall back to the defaults below.

Example::

    {"task": "arm", "task_params": {"arm": {"n_links": 8}},
     "operator": ["iso", "iso_line_cross"], "seeds": [1, 2, 3],
     "generations": 1500, "batch_size": 64, "centroids": 256}
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError
from .qd_loop import RunConfig
from .tasks import TASK_PARAMS, TASKS
from .variation import OperatorKind, OperatorParams, VariationOperator

OPERATOR_DEFAULTS = {"sigma_iso": 0.005, "sigma_line": 0.05, "lambda_cross": 0.1, "p_cross": 0.5}
RUN_DEFAULTS = {
    "generations": 4000,
    "batch_size": 256,
    "centroids": 1024,
    "cvt_samples": 50000,
    "cvt_seed": 0,
    "cvt_max_iters": 100,
    "cvt_tol": 1e-6,
    "initial_population_size": None,
}
ALLOWED_KEYS = ({"task", "task_params", "operator", "seed", "seeds", "out", "snapshot_every"}
                | set(OPERATOR_DEFAULTS) | set(RUN_DEFAULTS))


@dataclass
class ExperimentSpec:
    runs: list[RunConfig]
    out_dir: Path = Path("runs")
    snapshot_every: int = 0
    config_hash: str = ""
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.runs:
            raise ValidationError("runs", "an experiment needs at least one run")
        seen = set()
        for cfg in self.runs:
            key = (cfg.task, cfg.operator.name, cfg.seed)
            if key in seen:
                raise ValidationError("seeds", f"duplicate seed {cfg.seed} for {key[:2]}")
            seen.add(key)


def _as_list(value, name):
    items = value if isinstance(value, list) else [value]
    if not items:
        raise ValidationError(name, f"{name} must not be empty")
    return items


def _int_field(raw, name):
    value = raw[name]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(name, f"{name} must be an integer")
    return value


def spec_from_dict(raw: dict, config_hash: str = "") -> ExperimentSpec:
    if not isinstance(raw, dict):
        raise ParseError("config must be a JSON object")
    unknown = sorted(set(raw) - ALLOWED_KEYS)
    if unknown:
        raise ParseError(f"unknown config key {unknown[0]!r}", field=unknown[0])
    if "task" not in raw:
        raise ValidationError("task", "config must name a task")
    if "operator" not in raw:
        raise ValidationError("operator", "config must name an operator")
    if "seed" in raw and "seeds" in raw:
        raise ValidationError("seeds", "give either seed or seeds, not both")

    tasks = _as_list(raw["task"], "task")
    for t in tasks:
        if t not in TASKS:
            raise ValidationError("task", f"unknown task {t!r}")
    task_params = raw.get("task_params", {})
    if not isinstance(task_params, dict):
        raise ValidationError("task_params", "task_params must map task ids to objects")
    for t, params in task_params.items():
        if t not in TASKS:
            raise ValidationError("task_params", f"task_params names unknown task {t!r}")
        if not isinstance(params, dict):
            raise ValidationError("task_params", f"task_params[{t!r}] must be an object")
        extra = sorted(set(params) - TASK_PARAMS[t])
        if extra:
            raise ValidationError(f"task_params.{t}.{extra[0]}", f"unknown {t} parameter {extra[0]!r}")

    try:
        kinds = [OperatorKind(op) for op in _as_list(raw["operator"], "operator")]
    except ValueError as exc:
        raise ValidationError("operator", str(exc)) from None
    params = OperatorParams(**{k: raw.get(k, v) for k, v in OPERATOR_DEFAULTS.items()})

    seeds = _as_list(raw.get("seeds", raw.get("seed", 0)), "seeds")
    for s in seeds:
        if isinstance(s, bool) or not isinstance(s, int) or s < 0:
            raise ValidationError("seeds", "seeds must be non-negative integers")
    if len(set(seeds)) != len(seeds):
        raise ValidationError("seeds", "seeds must be distinct")

    run_kwargs = {k: raw.get(k, v) for k, v in RUN_DEFAULTS.items()}
    for name in ("generations", "batch_size", "centroids", "cvt_samples"):
        if name in raw:
            _int_field(raw, name)
    if not isinstance(run_kwargs["cvt_tol"], (int, float)) or isinstance(run_kwargs["cvt_tol"], bool):
        raise ValidationError("cvt_tol", "cvt_tol must be a number")

    snapshot_every = raw.get("snapshot_every", 0)
    if isinstance(snapshot_every, bool) or not isinstance(snapshot_every, int) or snapshot_every < 0:
        raise ValidationError("snapshot_every", "snapshot_every must be an integer >= 0")

    runs = [
        RunConfig(task=t, task_params=dict(task_params.get(t, {})),
                  operator=VariationOperator(kind, params), seed=s, **run_kwargs)
        for t in tasks for kind in kinds for s in seeds
    ]
    return ExperimentSpec(runs, Path(raw.get("out", "runs")), snapshot_every, config_hash, raw)


def parse_config(path) -> ExperimentSpec:
    data = Path(path).read_bytes()
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", line=exc.lineno) from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 ({exc.reason})") from None
    return spec_from_dict(raw, hashlib.sha256(data).hexdigest())
