import json
import os

import jsonschema
import numpy as np
import pytest

from stablecut import WeightedGraph, dumps_graph, load_graph, stability_report
from stablecut.cli import main

SCHEMA_PATH = os.path.join(
    os.path.dirname(__file__), "..", "src", "stablecut", "schemas", "report.schema.json"
)
with open(SCHEMA_PATH) as fh:
    SCHEMA = json.load(fh)


def _validate(doc: dict) -> None:
    jsonschema.validate(doc, SCHEMA)


def _write_triangle(tmp_path) -> str:
    g = WeightedGraph.from_edges(3, [(0, 1, 2.0), (1, 2, 3.0), (0, 2, 1.0)])
    path = tmp_path / "tri.graph"
    path.write_text(dumps_graph(g))
    return str(path)


def test_gen_planted_writes_files(tmp_path, capsys):
    out = tmp_path / "inst"
    rc = main(
        [
            "gen", "planted", "--n", "12", "--gamma", "4", "--dist",
            "uniform:0.5:1.5", "--seed", "7", "-o", str(out),
        ]
    )
    assert rc == 0
    printed = capsys.readouterr().out.strip()
    assert printed.endswith(".graph")
    assert os.path.exists(printed)
    sidecar = json.loads(open(printed.replace(".graph", ".json")).read())
    assert sidecar["model"] == "planted"
    assert sidecar["seed"] == 7
    assert len(sidecar["planted_cut"]) == 12
    g = load_graph(printed)
    assert g.n == 12


def test_gen_planted_odd_n_exits_2(tmp_path):
    rc = main(["gen", "planted", "--n", "11", "--gamma", "4", "-o", str(tmp_path)])
    assert rc == 2


def test_gen_scale_verifies_target(tmp_path, capsys):
    tri = _write_triangle(tmp_path)
    rc = main(["gen", "scale", "--input", tri, "--gamma", "4", "-o", str(tmp_path)])
    assert rc == 0
    printed = capsys.readouterr().out.strip()
    sidecar = json.loads(open(printed.replace(".graph", ".json")).read())
    assert sidecar["verified_gamma_star"] >= 4.0 - 1e-9
    scaled = load_graph(printed)
    assert stability_report(scaled).gamma_star >= 4.0 - 1e-9


def test_gen_amplify(tmp_path, capsys):
    tri = _write_triangle(tmp_path)
    rc = main(["gen", "amplify", "--input", tri, "--tau", "2", "-o", str(tmp_path)])
    assert rc == 0
    printed = capsys.readouterr().out.strip()
    assert load_graph(printed).n == 6


def test_solve_all_agree_on_c4(tmp_path, capsys):
    g = WeightedGraph.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])
    path = tmp_path / "c4.graph"
    path.write_text(dumps_graph(g))
    rc = main(["solve", "--solver", "all", "--no-timing", str(path)])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    _validate(doc)
    values = {
        name: entry["value"]
        for name, entry in doc["solvers"].items()
        if "value" in entry
    }
    assert set(values) == {"greedy", "contract", "spectral", "dual", "oracle"}
    assert all(v == 4.0 for v in values.values())
    assert doc["solvers"]["dual"]["certified"] is True
    assert doc["oracle"]["gamma_star"] == "inf"


def test_solve_require_certified_ok(tmp_path, capsys):
    tri = _write_triangle(tmp_path)
    scaled = tmp_path / "scaled.graph"
    rc = main(["gen", "scale", "--input", tri, "--gamma", "4", "-o", str(tmp_path)])
    printed = capsys.readouterr().out.strip()
    rc = main(
        ["solve", "--solver", "dual", "--require-certified", "--no-timing", printed]
    )
    assert rc == 0


def test_solve_require_certified_fails_on_tie(tmp_path, capsys):
    g = WeightedGraph(np.ones((3, 3)) - np.eye(3))
    path = tmp_path / "tie.graph"
    path.write_text(dumps_graph(g))
    rc = main(
        [
            "solve", "--solver", "dual", "--require-certified", "--no-timing",
            "--max-iter", "60", str(path),
        ]
    )
    assert rc == 3


def test_solve_oracle_over_limit_exits_4(tmp_path, capsys):
    rc = main(["gen", "gnp", "--n", "30", "--p", "0.4", "--seed", "1", "-o", str(tmp_path)])
    printed = capsys.readouterr().out.strip()
    rc = main(["solve", "--solver", "oracle", str(printed)])
    assert rc == 4


def test_solve_unreadable_file_exits_2(tmp_path):
    rc = main(["solve", "--solver", "dual", str(tmp_path / "nope.graph")])
    assert rc == 2


def test_oracle_limit_env_override(tmp_path, capsys, monkeypatch):
    rc = main(["gen", "gnp", "--n", "18", "--p", "0.4", "--seed", "1", "-o", str(tmp_path)])
    printed = capsys.readouterr().out.strip()
    monkeypatch.setenv("STABLECUT_ORACLE_LIMIT", "10")
    rc = main(["solve", "--solver", "oracle", printed])
    assert rc == 4
    monkeypatch.delenv("STABLECUT_ORACLE_LIMIT")
    rc = main(["solve", "--solver", "oracle", "--no-timing", printed])
    assert rc == 0


def test_verify_report_schema(tmp_path, capsys):
    tri = _write_triangle(tmp_path)
    rc = main(["verify", tri])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    _validate(doc)
    assert doc["oracle"]["gamma_star"] == 2.0


def test_spectrum_report_schema(tmp_path, capsys):
    tri = _write_triangle(tmp_path)
    rc = main(["spectrum", tri])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    _validate(doc)
    assert len(doc["eigenvalues"]) == 3
    assert doc["eigenvalues"][0] >= doc["eigenvalues"][-1]


def test_solve_iter_log(tmp_path, capsys):
    tri = _write_triangle(tmp_path)
    log = tmp_path / "iters.csv"
    rc = main(
        ["solve", "--solver", "dual", "--no-timing", "--iter-log", str(log), tri]
    )
    assert rc == 0
    lines = log.read_text().splitlines()
    assert lines[0] == "iter,trace,lambda_min,gap"
    assert len(lines) >= 2


def test_bench_deterministic_and_correct(tmp_path):
    args = [
        "bench", "--n", "12", "--gamma", "1.0,4.0", "--trials", "8",
        "--seed", "0", "--solver", "dual", "--no-timing",
    ]
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(args + ["-o", str(out1)]) == 0
    assert main(args + ["-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    assert lines[0] == "n,gamma,dist,trials,solver,recovery_rate,certified_rate,mean_ms"
    rows = {tuple(ln.split(",")[:2]): ln.split(",") for ln in lines[1:]}
    assert float(rows[("12", "4.0")][5]) == 1.0


def test_solve_rerun_byte_identical(tmp_path, capsys):
    tri = _write_triangle(tmp_path)
    rc = main(["solve", "--solver", "all", "--no-timing", tri])
    first = capsys.readouterr().out
    rc = main(["solve", "--solver", "all", "--no-timing", tri])
    second = capsys.readouterr().out
    assert first == second


def test_gen_rerun_byte_identical(tmp_path, capsys):
    for _ in range(2):
        rc = main(
            [
                "gen", "planted", "--n", "10", "--gamma", "2.5", "--seed", "3",
                "-o", str(tmp_path),
            ]
        )
        assert rc == 0
    printed = capsys.readouterr().out.strip().splitlines()
    assert printed[0] == printed[1]
    data1 = open(printed[0], "rb").read()
    rc = main(
        ["gen", "planted", "--n", "10", "--gamma", "2.5", "--seed", "3", "-o", str(tmp_path)]
    )
    assert open(printed[0], "rb").read() == data1
