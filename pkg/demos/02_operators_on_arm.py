"""
Comparing variation operators on the planar arm
===============================================

Runs the four operators on the same niches and seed, then prints the three
archive metrics plus the rolling offspring statistics.
"""
import numpy as np

from qdforge import RunConfig, VariationOperator, run
from qdforge.analysis import rolling_stats_from_reports
from qdforge.qd_loop import centroids_for

settings = dict(task="arm", task_params={"n_links": 8}, centroids=128, batch_size=32,
                generations=400, cvt_samples=20000, seed=1)

# Every operator shares one centroid set, so the comparison is controlled.
base = RunConfig(**settings)
niches = centroids_for(base, base.make_task())

results = {}
for op in ("iso", "iso_cross", "iso_line_dd", "iso_line_cross"):
    res = run(RunConfig(**settings, operator=VariationOperator(op)), centroid_set=niches)
    results[op] = res
    last = res.metrics[-1]
    print(f"{op:15s} qd={last.qd_score:8.2f}  coverage={last.coverage:.3f}  "
          f"max fitness={last.max_fitness:.2e}")

# Offspring added per generation and QD score gained per added offspring,
# smoothed over 100 generations.
for op, res in results.items():
    added, per_offspring = rolling_stats_from_reports(res.reports, window=100)
    print(f"{op:15s} added/gen={added[-1]:5.2f}  qd per offspring={per_offspring[-1]:.4f}")

# Where did the elites end up? End-effector positions of the final archive.
elites = results["iso_line_cross"].archive.elites()
xy = np.array([sol.descriptor for _, sol in elites])
print("reach spans x in [%.2f, %.2f], y in [%.2f, %.2f]" % (xy[:, 0].min(), xy[:, 0].max(),
                                                            xy[:, 1].min(), xy[:, 1].max()))
