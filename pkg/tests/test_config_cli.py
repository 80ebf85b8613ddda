import json
import os
from pathlib import Path

import numpy as np
import pytest

from qdforge import cli
from qdforge.config import ExperimentSpec, parse_config, spec_from_dict
from qdforge.errors import ParseError, ValidationError
from qdforge.qd_loop import RunConfig
from qdforge.serialize import read_archive_jsonl, read_centroids_csv, read_metrics_csv
from qdforge.variation import VariationOperator

TINY = {"generations": 6, "batch_size": 4, "centroids": 8, "cvt_samples": 200}


def write(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return p


class TestParseConfig:
    def test_minimal(self, tmp_path):
        spec = parse_config(write(tmp_path, {"task": "arm", "operator": "iso", "generations": 10, "seed": 1}))
        (cfg,) = spec.runs
        assert cfg.generations == 10 and cfg.seed == 1 and cfg.task == "arm"
        assert (cfg.batch_size, cfg.centroids, cfg.cvt_samples) == (256, 1024, 50000)
        assert cfg.initial_population_size == 256

    def test_operator_defaults(self, tmp_path):
        spec = parse_config(write(tmp_path, {"task": "arm", "operator": "iso_line_cross"}))
        p = spec.runs[0].operator.params
        assert (p.sigma_iso, p.sigma_line, p.lambda_cross, p.p_cross) == (0.005, 0.05, 0.1, 0.5)

    def test_bad_probability(self, tmp_path):
        with pytest.raises(ValidationError) as info:
            parse_config(write(tmp_path, {"task": "arm", "operator": "iso", "p_cross": 1.5}))
        assert info.value.field == "p_cross"

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ParseError) as info:
            parse_config(write(tmp_path, {"task": "arm", "operator": "iso", "sigma": 1}))
        assert info.value.field == "sigma"

    def test_syntax_error_line(self, tmp_path):
        with pytest.raises(ParseError) as info:
            parse_config(write(tmp_path, '{"task": "arm",\n\n  "operator": }'))
        assert info.value.line == 3

    def test_grid(self, tmp_path):
        spec = parse_config(write(tmp_path, {
            "task": "arm", "seeds": [1, 2, 3],
            "operator": ["iso", "iso_cross", "iso_line_dd", "iso_line_cross"]}))
        assert len(spec.runs) == 12

    @pytest.mark.parametrize("raw,field", [
        ({"task": "walker", "operator": "iso"}, "task"),
        ({"task": "arm", "operator": "gauss"}, "operator"),
        ({"task": "arm", "operator": "iso", "seeds": [1, 1]}, "seeds"),
        ({"task": "arm", "operator": "iso", "batch_size": 0}, "batch_size"),
        ({"task": "arm", "operator": "iso", "generations": 2.5}, "generations"),
        ({"task": "arm", "operator": "iso", "task_params": {"arm": {"links": 2}}}, "task_params.arm.links"),
        ({"operator": "iso"}, "task"),
    ])
    def test_validation_names_field(self, raw, field):
        with pytest.raises(ValidationError) as info:
            spec_from_dict(raw)
        assert info.value.field == field

    def test_hash_tracks_bytes(self, tmp_path):
        a = parse_config(write(tmp_path, {"task": "arm", "operator": "iso"}, "a.json"))
        b = parse_config(write(tmp_path, {"task": "arm", "operator": "iso"}, "b.json"))
        c = parse_config(write(tmp_path, {"task": "arm", "operator": "iso", "seed": 2}, "c.json"))
        assert a.config_hash == b.config_hash != c.config_hash


class TestSweep:
    def test_grid_layout(self, tmp_path):
        spec = spec_from_dict({"task": "arm", "seeds": [1, 2, 3], "out": str(tmp_path / "out"),
                               "operator": ["iso", "iso_cross", "iso_line_dd", "iso_line_cross"], **TINY})
        assert cli.run_sweep(spec) == 0
        dirs = sorted(p.parent for p in (tmp_path / "out").rglob("metrics.csv"))
        assert len(dirs) == 12
        d = tmp_path / "out" / "arm" / "iso_cross" / "seed_2"
        assert {p.name for p in d.iterdir()} >= {"metrics.csv", "archive_final.jsonl", "manifest.json"}
        manifest = json.loads((d / "manifest.json").read_text())
        assert manifest["seed"] == 2 and manifest["status"] == "ok"
        assert "wall_time_s" in manifest and manifest["config_hash"] == spec.config_hash

    def test_rerun_identical(self, tmp_path):
        raw = {"task": "rastrigin", "task_params": {"rastrigin": {"dims": 4}},
               "operator": "iso_line_cross", "seeds": [5, 6], **TINY}
        for name in ("a", "b"):
            cli.run_sweep(spec_from_dict({**raw, "out": str(tmp_path / name)}))
        for f in (tmp_path / "a").rglob("*.csv"):
            assert f.read_bytes() == (tmp_path / "b" / f.relative_to(tmp_path / "a")).read_bytes()

    def test_failure_isolated(self, tmp_path):
        good = RunConfig(task="arm", seed=1, **TINY)
        bad = RunConfig(task="rastrigin", task_params={"dims": 1}, seed=1, **TINY)
        spec = ExperimentSpec([good, bad], out_dir=tmp_path)
        assert cli.run_sweep(spec) == 1
        assert (tmp_path / "arm" / "iso_line_cross" / "seed_1" / "metrics.csv").exists()
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        statuses = {r["task"]: r["status"] for r in manifest["runs"]}
        assert statuses == {"arm": "ok", "rastrigin": "failed"}
        assert manifest["failed"] == 1

    def test_shared_centroids(self, tmp_path):
        spec = spec_from_dict({"task": "arm", "operator": ["iso", "iso_line_dd"], "seeds": [1, 2],
                               "out": str(tmp_path), **TINY})
        cli.run_sweep(spec)
        cache = list((tmp_path / "_centroids").glob("*.csv"))
        assert len(cache) == 1
        cs = read_centroids_csv(cache[0], [[-1, 1], [-1, 1]])
        for f in tmp_path.rglob("archive_final.jsonl"):
            for rec in read_archive_jsonl(f):
                np.testing.assert_array_equal(rec["centroid"], cs.centroids[rec["cell_index"]])

    def test_seed_offset(self, tmp_path, monkeypatch):
        cfg = write(tmp_path, {"task": "arm", "operator": "iso", "seed": 1, **TINY})
        monkeypatch.setenv("QDFORGE_SEED_OFFSET", "10")
        assert cli.main(["run", str(cfg), "--out", str(tmp_path / "o")]) == 0
        assert (tmp_path / "o" / "arm" / "iso" / "seed_11" / "metrics.csv").exists()


class TestCommands:
    def test_run_flags_and_analyze(self, tmp_path):
        cfg = write(tmp_path, {"task": "arm", "operator": ["iso", "iso_line_cross"],
                               "seed": 4, **TINY})
        out = tmp_path / "o"
        rc = cli.main(["run", "--config", str(cfg), "--out", str(out), "--jobs", "2",
                       "--snapshot-every", "3"])
        assert rc == 0
        run_dir = out / "arm" / "iso" / "seed_4"
        assert (run_dir / "archive_gen_3.jsonl").exists() and (run_dir / "archive_gen_6.jsonl").exists()
        assert cli.main(["analyze", str(out), "--window", "2"]) == 0
        rows = (run_dir / "analysis.csv").read_text().splitlines()
        assert rows[0].startswith("generation,") and len(rows) == 7
        eff = (run_dir / "effective_dim.csv").read_text().splitlines()
        assert [r.split(",")[0] for r in eff[1:]] == ["archive_gen_3", "archive_gen_6", "archive_final"]

    def test_analyze_matches_library(self, tmp_path):
        out = tmp_path / "o"
        cli.run_sweep(spec_from_dict({"task": "arm", "operator": "iso_line_cross", "seed": 2,
                                      "out": str(out), "generations": 12, "batch_size": 8,
                                      "centroids": 16, "cvt_samples": 300}))
        run_dir = out / "arm" / "iso_line_cross" / "seed_2"
        cli.analyze_run(run_dir, window=5)
        from qdforge.analysis import effective_dimensionality, rolling_stats
        recs = read_metrics_csv(run_dir / "metrics.csv")
        mean, per = rolling_stats([r.offspring_added for r in recs], [r.qd_score_added for r in recs], 5)
        rows = [line.split(",") for line in (run_dir / "analysis.csv").read_text().splitlines()[1:]]
        assert [float(r[1]) for r in rows] == list(mean)
        assert [float(r[2]) for r in rows] == list(per)
        elites = read_archive_jsonl(run_dir / "archive_final.jsonl")
        expected = effective_dimensionality(np.array([e["genotype"] for e in elites])).num_components
        last = (run_dir / "effective_dim.csv").read_text().splitlines()[-1].split(",")
        assert int(last[2]) == expected

    def test_centroids_command(self, tmp_path):
        assert cli.main(["centroids", "16", "rastrigin", "--out", str(tmp_path),
                         "--cvt-samples", "500", "--cvt-seed", "3"]) == 0
        (path,) = tmp_path.glob("*.csv")
        cs = read_centroids_csv(path, [[-5.12, 5.12]] * 2)
        assert cs.centroids.shape == (16, 2)
        assert np.abs(cs.centroids).max() <= 5.12

    def test_errors_give_nonzero_exit(self, tmp_path):
        assert cli.main(["run", str(write(tmp_path, "{ nope"))]) == 2
        assert cli.main(["analyze", str(tmp_path / "missing")]) == 1
