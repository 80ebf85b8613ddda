"""CVT-MAP-Elites with isotropic, line and discrete-crossover variation."""
from .analysis import (EffectiveDimReport, MetricsRecord, coverage, effective_dimensionality,
                       max_fitness, qd_score, rolling_stats)
from .archive import CentroidSet, CvtArchive, Outcome, build_centroids, nearest_centroid
from .errors import (DegenerateData, DimensionMismatch, EmptyArchive, InvalidBounds,
                     NonFiniteValue, ParseError, QDError, ValidationError)
from .genome import ScoredSolution, validate
from .qd_loop import GenerationReport, RunConfig, RunResult, initialize, run, step
from .tasks import ArmTask, MlpPointTask, RastriginTask, make_task
from .variation import (OperatorKind, OperatorParams, VariationOperator, crossover,
                        generate_mask, iso_mutate, line_dd_mutate, vary)

__version__ = "0.1.0"
