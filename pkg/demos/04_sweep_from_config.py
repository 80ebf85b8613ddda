"""
Seeded sweeps from a JSON config
================================

The same machinery the ``qdforge run`` command uses. The config below is a
2 x 2 grid (two operators, two seeds); each run gets its own directory with
metrics.csv, archive_final.jsonl and a manifest.
"""
import json
import tempfile
from pathlib import Path

from qdforge.cli import analyze, run_sweep
from qdforge.config import parse_config

out = Path(tempfile.mkdtemp(prefix="qdforge_demo_"))
config = {
    "task": "rastrigin",
    "task_params": {"rastrigin": {"dims": 6}},
    "operator": ["iso_line_dd", "iso_line_cross"],
    "seeds": [1, 2],
    "generations": 100,
    "batch_size": 32,
    "centroids": 64,
    "cvt_samples": 5000,
    "snapshot_every": 50,
    "out": str(out),
}
(out / "sweep.json").write_text(json.dumps(config, indent=2))

spec = parse_config(out / "sweep.json")
print("runs:", [(c.operator.name, c.seed) for c in spec.runs])
print("exit status:", run_sweep(spec))

# Rolling statistics and PCA for every finished run.
for run_dir in analyze(out, window=20):
    print(run_dir.relative_to(out))
    print("   ", (run_dir / "effective_dim.csv").read_text().splitlines()[-1])

print("outputs under", out)
