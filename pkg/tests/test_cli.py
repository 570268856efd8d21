import json

import numpy as np
import pytest

from gkmeans.cli import main
from gkmeans.io import read_matrix_csv, read_vector_csv


@pytest.fixture
def tiny_csv(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text("0\n1\n9\n10\n")
    return path


def test_generate_writes_data_and_labels(tmp_path, capsys):
    out = tmp_path / "g.csv"
    rc = main(["generate", "--preset", "separated", "--k", "5", "--per-cluster", "20",
               "--d", "16", "--seed", "7", "--out", str(out)])
    assert rc == 0
    data, _ = read_matrix_csv(out)
    assert data.shape == (100, 16)
    labels = read_vector_csv(tmp_path / "g.labels.csv")
    np.testing.assert_array_equal(np.bincount(labels), [20] * 5)
    assert "m=100 d=16 k=5" in capsys.readouterr().out


def test_generate_round_trip_is_lossless(tmp_path):
    from gkmeans.datagen import generate_gaussian_mixture, preset_spec

    out = tmp_path / "o.csv"
    main(["generate", "--preset", "overlapped", "--k", "3", "--per-cluster", "10", "--d", "4",
          "--seed", "1", "--out", str(out), "--with-labels"])
    data, labels = read_matrix_csv(out, "last")
    X, y = generate_gaussian_mixture(preset_spec("overlapped", 3, 10, 4, seed=1))
    assert data.tobytes() == X.tobytes()
    np.testing.assert_array_equal(labels, y)


def test_generate_missing_flag_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--preset", "separated", "--k", "5", "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 2


def test_run_tiny_fixture(tiny_csv, tmp_path):
    prefix = tmp_path / "res"
    assert main(["run", "--input", str(tiny_csv), "--k", "2", "--algorithm", "gkmeans",
                 "--seed", "1", "--out", str(prefix)]) == 0
    summary = json.loads((tmp_path / "res.summary.json").read_text())
    assert summary["sse"] == 1.0
    assert set(summary) >= {"iterations", "sse", "dc_total", "dc_breakdown", "elapsed_ms"}
    assert read_vector_csv(tmp_path / "res.assign.csv").size == 4
    cents, _ = read_matrix_csv(tmp_path / "res.centroids.csv")
    assert sorted(cents[:, 0]) == [0.5, 9.5]
    assert (tmp_path / "res.telemetry.csv").read_text().startswith("iter,")

    assert main(["run", "--input", str(tiny_csv), "--k", "2", "--algorithm", "lloyd",
                 "--seed", "1", "--out", str(tmp_path / "ref")]) == 0
    assert (tmp_path / "ref.assign.csv").read_bytes() == (tmp_path / "res.assign.csv").read_bytes()


def test_run_without_seed_prints_notice(tiny_csv, tmp_path, capsys):
    assert main(["run", "--input", str(tiny_csv), "--k", "2", "--out", str(tmp_path / "r")]) == 0
    assert "time-derived seed" in capsys.readouterr().out


def test_run_errors(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,x\n")
    assert main(["run", "--input", str(bad), "--k", "2", "--seed", "0",
                 "--out", str(tmp_path / "o")]) == 3
    assert "row 2, column 2" in capsys.readouterr().err

    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert main(["run", "--input", str(empty), "--k", "2", "--seed", "0",
                 "--out", str(tmp_path / "o")]) == 3
    assert "no rows" in capsys.readouterr().err

    small = tmp_path / "small.csv"
    small.write_text("1\n2\n")
    assert main(["run", "--input", str(small), "--k", "3", "--seed", "0",
                 "--out", str(tmp_path / "o")]) == 2

    assert main(["run", "--input", str(tmp_path / "nope.csv"), "--k", "2", "--seed", "0",
                 "--out", str(tmp_path / "o")]) == 3


def test_verify_passes_and_writes_json(tiny_csv, tmp_path):
    out = tmp_path / "verdict.json"
    assert main(["verify", "--input", str(tiny_csv), "--k", "2", "--seed", "0",
                 "--hamerly", "--json", str(out)]) == 0
    verdict = json.loads(out.read_text())
    assert verdict["passed"] and verdict["n_seeds"] == 20
    assert all(r["ari"] == 1.0 for r in verdict["results"])


def test_verify_requires_seed(tiny_csv):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--input", str(tiny_csv), "--k", "2"])
    assert exc.value.code == 2


def test_verify_k1_is_config_error(tiny_csv):
    assert main(["verify", "--input", str(tiny_csv), "--k", "1", "--seed", "0"]) == 2


def test_verify_detects_mismatched_tie_break(tmp_path, capsys):
    data = tmp_path / "ties.csv"
    data.write_text("0\n2\n4\n")
    rc = main(["verify", "--input", str(data), "--k", "2", "--seed", "0",
               "--tie-break-hook", "highest"])
    assert rc == 1
    assert "first divergent iteration: 1" in capsys.readouterr().out


def test_verify_compares_assignment_files(tiny_csv, tmp_path):
    a, b = tmp_path / "a.assign.csv", tmp_path / "b.assign.csv"
    a.write_text("0\n0\n1\n1\n")
    b.write_text("1\n1\n0\n0\n")
    out = tmp_path / "v.json"
    rc = main(["verify", "--input", str(tiny_csv), "--k", "2", "--seed", "0", "--n-seeds", "2",
               "--assignments", str(a), str(a), "--json", str(out)])
    assert rc == 0 and json.loads(out.read_text())["assignments"]["ari"] == 1.0
    rc = main(["verify", "--input", str(tiny_csv), "--k", "2", "--seed", "0", "--n-seeds", "2",
               "--assignments", str(a), str(b)])
    assert rc == 1


def test_bench_command(tmp_path):
    cfg = {
        "datasets": [{"name": "sep", "preset": "separated", "k": 4, "per_cluster": 30, "d": 2, "seed": 1}],
        "algorithms": ["lloyd", "gkmeans"],
        "k": [4],
        "trials": 2,
        "max_iters": 100,
        "seed": 3,
    }
    path = tmp_path / "bench.json"
    path.write_text(json.dumps(cfg))
    assert main(["bench", str(path), "--out", str(tmp_path / "rep")]) == 0
    rep = json.loads((tmp_path / "rep" / "report.json").read_text())
    assert [c["algorithm"] for c in rep["cells"]] == ["lloyd", "gkmeans"]
    assert (tmp_path / "rep" / "report.csv").exists()


def test_bench_requires_seed(tmp_path):
    path = tmp_path / "bench.json"
    path.write_text(json.dumps({"datasets": [{"preset": "separated", "k": 2, "per_cluster": 5, "d": 1}],
                                "algorithms": ["lloyd"], "k": [2]}))
    assert main(["bench", str(path)]) == 2


def test_label_column_flag(tmp_path):
    path = tmp_path / "lab.csv"
    path.write_text("0,5\n1,5\n9,6\n10,6\n")
    assert main(["run", "--input", str(path), "--label-column", "last", "--k", "2", "--seed", "1",
                 "--out", str(tmp_path / "r")]) == 0
    assert json.loads((tmp_path / "r.summary.json").read_text())["sse"] == 1.0
