"""
Effective dimensionality of elite archives
==========================================

Counts the principal components needed to explain 95% of the genotype
variance in a final archive, here on the high-dimensional MLP controller
task, where the genotype has far more genes than the descriptor has axes.
"""
from qdforge import RunConfig, VariationOperator, effective_dimensionality, run
from qdforge.qd_loop import centroids_for

settings = dict(task="mlp_point", task_params={"hidden": [8, 8], "steps": 20},
                centroids=64, batch_size=32, generations=150, cvt_samples=10000, seed=3)
base = RunConfig(**settings)
niches = centroids_for(base, base.make_task())
print("genotype length:", base.make_task().genotype_dim)

for op in ("iso", "iso_line_dd", "iso_cross", "iso_line_cross"):
    res = run(RunConfig(**settings, operator=VariationOperator(op)), centroid_set=niches)
    report = effective_dimensionality(res.archive.genotypes())
    top = ", ".join(f"{f:.2f}" for f in report.variance_fractions[:4])
    print(f"{op:15s} elites={len(res.archive):3d}  components for 95%={report.num_components:3d}  "
          f"leading fractions: {top}")
