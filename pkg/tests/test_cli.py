import json
import subprocess
import sys

import pytest

from explainclust.cli import main


@pytest.fixture
def files(tmp_path):
    (tmp_path / "line.csv").write_text("0\n1\n3\n")
    (tmp_path / "four.csv").write_text("0,0\n1,3\n4,1\n2,2\n")
    (tmp_path / "p3.txt").write_text("3 2\n1 2\n2 3\n")
    (tmp_path / "p4.txt").write_text("4 3\n1 2\n2 3\n3 4\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if code == 0 else None), err


def test_fit(files, capsys):
    code, rep, err = run(capsys, "fit", "--input", files / "line.csv", "--k", 2, "--out", files / "t.json")
    assert code == 0
    assert rep["cost"] == 2.0 and rep["spacings"] == [2.0]
    assert rep["tree"]["cut"] == {"dim": 0, "theta": 2.0}
    assert json.loads((files / "t.json").read_text()) == rep["tree"]
    assert "fit" in err
    for key in ("command", "args", "inputs", "objective", "wall_time"):
        assert key in rep


def test_fit_k1_is_usage_error(files, capsys):
    code, _, err = run(capsys, "fit", "--input", files / "line.csv", "--k", 1)
    assert code == 2 and "k" in err


def test_fit_full_refinement(files, capsys):
    code, rep, _ = run(capsys, "fit", "--input", files / "four.csv", "--k", 4)
    assert code == 0
    assert rep["cost"] == pytest.approx(2 ** 0.5)  # min pairwise distance: (1,3)-(2,2)


def test_fit_eval_round_trip(files, capsys):
    _, fitted, _ = run(capsys, "fit", "--input", files / "four.csv", "--k", 3, "--out", files / "t.json")
    code, rep, _ = run(capsys, "eval", "--tree", files / "t.json", "--input", files / "four.csv",
                       "--objective", "spacing")
    assert code == 0 and rep["cost"] == fitted["cost"]


def test_eval_center_based_prints_representatives(files, capsys):
    run(capsys, "fit", "--input", files / "line.csv", "--k", 2, "--out", files / "t.json")
    code, rep, _ = run(capsys, "eval", "--tree", files / "t.json", "--input", files / "line.csv",
                       "--objective", "k-means")
    assert code == 0
    assert rep["cost"] == 0.5 and rep["representatives"] == [[0.5], [3.0]]


def test_eval_cover_tree_kmeans(files, capsys):
    run(capsys, "cover-tree", "--graph", files / "p3.txt", "--out", files / "c.json")
    run(capsys, "reduce", "--graph", files / "p3.txt", "--out", files / "x.csv")
    code, rep, _ = run(capsys, "eval", "--tree", files / "c.json", "--input", files / "x.csv",
                       "--objective", "k-means")
    assert code == 0 and rep["cost"] == pytest.approx(1.0)


def test_eval_errors(files, capsys):
    (files / "leaf.json").write_text('{"leaf":0}')
    code, _, _ = run(capsys, "eval", "--tree", files / "leaf.json", "--input", files / "line.csv",
                     "--objective", "spacing")
    assert code == 2
    (files / "deep.json").write_text('{"cut":{"dim":3,"theta":0},"left":{"leaf":0},"right":{"leaf":1}}')
    code, _, _ = run(capsys, "eval", "--tree", files / "deep.json", "--input", files / "line.csv",
                     "--objective", "k-means")
    assert code == 2


def test_reduce(files, capsys):
    code, rep, _ = run(capsys, "reduce", "--graph", files / "p3.txt", "--out", files / "x.csv")
    assert code == 0
    assert (files / "x.csv").read_text() == "1,1,0\n0,1,1\n"


def test_vc(files, capsys):
    code, rep, _ = run(capsys, "vc", "--graph", files / "p4.txt")
    assert code == 0 and rep["size"] == 2


def test_cover_tree_explicit_cover(files, capsys):
    code, rep, _ = run(capsys, "cover-tree", "--graph", files / "p4.txt", "--cover", "2,3")
    assert code == 0
    assert rep["clusters"] == [[0, 1], [2]]
    assert rep["predicted_kmeans"] == 1.0 and rep["costs"]["k-means"] == pytest.approx(1.0)
    code, _, _ = run(capsys, "cover-tree", "--graph", files / "p4.txt", "--cover", "2")
    assert code == 2


def test_oracle_and_baseline(files, capsys):
    code, rep, _ = run(capsys, "oracle", "--input", files / "line.csv", "--k", 2, "--objective", "k-means")
    assert code == 0 and rep["cost"] == 0.5
    code, rep, _ = run(capsys, "baseline-spacing", "--input", files / "line.csv", "--k", 3)
    assert code == 0 and rep["cost"] == 1.0


def test_oracle_limit_exit_code(files, capsys):
    code, _, err = run(capsys, "oracle", "--input", files / "line.csv", "--k", 2, "--objective", "spacing",
                       "--max-n", 2)
    assert code == 3 and "limit" in err


def test_price(files, capsys):
    code, rep, _ = run(capsys, "price", "--input", files / "line.csv", "--k", 2, "--objective", "spacing")
    assert code == 0 and rep["price"] == 1.0
    code, rep, _ = run(capsys, "price", "--input", files / "four.csv", "--k", 2, "--objective", "k-means")
    assert code == 0 and rep["price"] >= 1.0


def test_gen_graph(files, capsys):
    out = files / "g.txt"
    code, rep, _ = run(capsys, "gen-graph", "--family", "random-3-bounded-triangle-free", "--n", 12,
                       "--m", 14, "--seed", 7, "--out", out)
    assert code == 0 and rep["triangle_free"] and rep["max_degree"] <= 3
    code, rep, _ = run(capsys, "gen-graph", "--family", "cycle")
    assert code == 2


def test_missing_input_file(files, capsys):
    code, _, _ = run(capsys, "fit", "--input", files / "nope.csv", "--k", 2)
    assert code == 2


def test_reports_reproducible(files, capsys):
    reps = []
    for _ in range(2):
        _, rep, _ = run(capsys, "oracle", "--input", files / "four.csv", "--k", 3, "--objective", "k-medians")
        rep.pop("wall_time")
        reps.append(json.dumps(rep, sort_keys=True))
    assert reps[0] == reps[1]


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "explainclust", "fit", "--input", str(files / "line.csv"),
                           "--k", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["cost"] == 2.0
