import json
import subprocess
import sys

import numpy as np
import pytest

from transcost import io
from transcost.cli import run
from transcost.embedding import cycle_path_embedding
from transcost.metric import cycle_graph, geodesic_metric, random_tree
from transcost.transport import ZeroSumMeasure
from transcost.trees import RootedWeightedTree


def _json(capsys):
    return json.loads(capsys.readouterr().out)


class TestFormats:
    def test_metric_roundtrip(self):
        M = geodesic_metric(cycle_graph(5))
        back = io.metric_from_json(json.loads(io.dumps(io.metric_to_json(M))))
        assert np.array_equal(back.dist, M.dist)

    def test_measure_roundtrip(self):
        M = geodesic_metric(cycle_graph(5))
        mu = ZeroSumMeasure(M, {0: 0.5, 3: -0.5})
        back = io.measure_from_json(io.measure_to_json(mu))
        assert back.coeffs == mu.coeffs and np.array_equal(back.space.dist, M.dist)

    def test_tree_roundtrip(self):
        t = RootedWeightedTree.from_graph(random_tree(8, seed=0))
        back = io.tree_from_json(io.tree_to_json(t))
        assert np.array_equal(back.parent, t.parent) and np.array_equal(back.weight, t.weight)

    def test_embedding_roundtrip(self):
        emb = cycle_path_embedding(5)
        back = io.embedding_from_json(io.embedding_to_json(emb), emb.base)
        assert np.allclose(back.stretch(), emb.stretch())

    def test_bad_json(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text("{")
        with pytest.raises(io.FormatError):
            io.load_json(p)
        with pytest.raises(io.FormatError):
            io.load_json(tmp_path / "missing.json")

    def test_csv(self):
        assert io.to_csv(("a", "b"), [(1, 0.5)]) == "a,b\n1,0.5\n"


class TestCli:
    def test_gen(self, capsys):
        assert run(["gen", "--graph", "cycle:4"]) == 0
        assert _json(capsys)["n"] == 4

    def test_tcnorm_graph(self, capsys):
        assert run(["tcnorm", "--graph", "cycle:6", "--seed", "3"]) == 0
        rep = _json(capsys)
        assert rep["certified"] and rep["value"] == pytest.approx(rep["dual_pairing"])
        assert rep["seed"] == 3 and len(rep["config_hash"]) == 64

    def test_tcnorm_measure_file(self, tmp_path, capsys):
        M = geodesic_metric(cycle_graph(4))
        p = tmp_path / "mu.json"
        p.write_text(io.dumps(io.measure_to_json(ZeroSumMeasure(M, {0: 1, 2: 1, 1: -1, 3: -1}))))
        assert run(["tcnorm", "--measure", str(p)]) == 0
        assert _json(capsys)["value"] == pytest.approx(2.0)

    def test_tcnorm_two_point(self, tmp_path, capsys):
        p = tmp_path / "mu.json"
        p.write_text(json.dumps({"space": {"dist": [[0, 2.5], [2.5, 0]]}, "coeffs": {"0": -1, "1": 1}}))
        assert run(["tcnorm", "--measure", str(p)]) == 0
        rep = _json(capsys)
        assert rep["value"] == 2.5 and rep["certified"]

    def test_embed_twice_identical(self, capsys):
        argv = ["embed", "--graph", "cycle:8", "--samples", "200", "--seed", "7"]
        run(argv)
        first = capsys.readouterr().out
        run(argv)
        assert capsys.readouterr().out == first

    def test_tcnorm_csv(self, capsys):
        assert run(["tcnorm", "--graph", "cycle:5", "--csv"]) == 0
        assert capsys.readouterr().out.startswith("row,col,mass\n")

    def test_wasserstein(self, tmp_path, capsys):
        (tmp_path / "s.json").write_text("[1, 0, 0, 0]")
        (tmp_path / "t.json").write_text("[0, 0, 1, 0]")
        code = run(["wasserstein", "--graph", "cycle:4", "--sigma", str(tmp_path / "s.json"), "--tau", str(tmp_path / "t.json")])
        assert code == 0 and _json(capsys)["value"] == 2.0

    def test_wasserstein_not_probability(self, tmp_path, capsys):
        (tmp_path / "s.json").write_text("[0.5, 0, 0, 0]")
        code = run(["wasserstein", "--graph", "cycle:4", "--sigma", str(tmp_path / "s.json"), "--tau", str(tmp_path / "s.json")])
        assert code == 1
        assert json.loads(capsys.readouterr().err)["error"] == "not_probability"

    def test_tree_norm_and_gupta(self, tmp_path, capsys):
        p = tmp_path / "t.json"
        p.write_text(io.dumps(io.tree_to_json(RootedWeightedTree.from_graph(random_tree(7, seed=1)))))
        assert run(["tree-norm", "--tree", str(p)]) == 0
        assert _json(capsys)["value"] > 0
        assert run(["gupta", "--tree", str(p), "--keep", "0,3,5"]) == 0
        rep = _json(capsys)
        assert 0.25 - 1e-9 <= rep["min_ratio"] and rep["max_ratio"] <= 2 + 1e-9

    def test_frt_threads_byte_identical(self, capsys):
        run(["frt", "--graph", "cycle:10", "--samples", "20", "--seed", "4", "--threads", "1"])
        a = capsys.readouterr().out
        run(["frt", "--graph", "cycle:10", "--samples", "20", "--seed", "4", "--threads", "4"])
        assert capsys.readouterr().out == a

    def test_embed_and_calculus(self, tmp_path, capsys):
        out = tmp_path / "emb.json"
        assert run(["embed", "--graph", "cycle:6", "--samples", "10", "--measures", "5", "--embedding-out", str(out)]) == 0
        assert _json(capsys)["lower_bound_holds"]
        assert json.loads(out.read_text())["p"]
        assert run(["calculus", "--graph", "cycle:6", "--samples", "10"]) == 0
        assert _json(capsys)["lip_bound_holds"]

    def test_bounds(self, capsys):
        assert run(["bounds", "--graph", "cycle:6", "--delta", "1", "--sobolev-samples", "20"]) == 0
        assert _json(capsys)

    def test_usage_errors(self, capsys):
        assert run(["frt", "--graph", "cycle:6", "--samples", "0"]) == 2
        assert run(["tcnorm"]) == 2
        assert run(["nosuch"]) == 2
        capsys.readouterr()

    def test_domain_error_exit_one(self, tmp_path, capsys):
        p = tmp_path / "m.json"
        p.write_text(json.dumps({"space": {"dist": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]}, "coeffs": {"0": 1, "1": -1}}))
        assert run(["tcnorm", "--measure", str(p)]) == 1
        assert json.loads(capsys.readouterr().err)["error"] == "triangle_violation"

    def test_module_entry_point(self):
        res = subprocess.run([sys.executable, "-m", "transcost", "gen", "--graph", "cycle:3"], capture_output=True, text=True)
        assert res.returncode == 0 and json.loads(res.stdout)["n"] == 3
