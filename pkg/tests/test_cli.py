import json
import subprocess
import sys

import pytest

from ndgcolor.cli import main
from ndgcolor.graph import complete_graph, petersen_graph
from ndgcolor.io import write_graph
from ndgcolor.lab import gen_gnp


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_counterexample_then_oracle(tmp_path, capsys):
    g = tmp_path / "c6.json"
    assert run(["gen", "counterexample", "--p", 2, "--D", 2, "--out", g], capsys)[0] == 0
    code, out, err = run(["oracle", "--input", g, "--c", 2, "--p", 2, "--D", 2], capsys)
    assert code == 3 and json.loads(out)["status"] == "none" and "no coloring exists" in err


def test_color_clique(tmp_path, capsys):
    path = tmp_path / "k5.col"
    write_graph(complete_graph(5), path)
    code, out, _ = run(["color", "--input", path, "--D", 4], capsys)
    assert code == 2 and json.loads(out)["certificate"] == [0, 1, 2, 3, 4]


def test_color_then_verify(tmp_path, capsys):
    path = tmp_path / "g.json"
    write_graph(gen_gnp(30, 0.3, seed=0), path)
    res = tmp_path / "res.json"
    code, _, _ = run(["color", "--input", path, "--heuristic-p", 5, "--heuristic-q", 3, "--out", res], capsys)
    assert code == 0
    env = json.loads(res.read_text())
    assert env["status"] == "colored" and set(env) == {"status", "coloring", "report", "certificate"}
    code, out, _ = run(["verify", "--input", path, "--coloring", res, "--c", 2, "--p", 5], capsys)
    assert code == 0 and json.loads(out)["ok"]


def test_byte_identical(tmp_path, capsys):
    path = tmp_path / "g.json"
    write_graph(gen_gnp(40, 0.25, seed=3), path)
    outs = []
    for name in ("a.json", "b.json"):
        run(["color", "--input", path, "--heuristic-p", 6, "--heuristic-q", 3, "--seed", 9,
             "--out", tmp_path / name], capsys)
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["report"]["run"]["seed"] == 9


def test_decompose(tmp_path, capsys):
    path = tmp_path / "p.json"
    write_graph(petersen_graph(), path)
    code, out, _ = run(["decompose", "--input", path, "--alphas", "2,2"], capsys)
    body = json.loads(out)
    assert code == 0 and body["status"] == "decomposed" and max(body["max_degrees"]) <= 2
    assert run(["decompose", "--input", path, "--alphas", "2,1"], capsys)[0] == 4


def test_lemma(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    assert run(["gen", "lemma", "--bn", 120, "--out", inst], capsys)[0] == 0
    code, out, _ = run(["lemma", "--instance", inst, "--seed", 3], capsys)
    body = json.loads(out)
    assert code == 0 and min(body["a_counts"]) >= 4


def test_input_errors(tmp_path, capsys):
    assert run(["color", "--input", tmp_path / "missing.json"], capsys)[0] == 4
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["color", "--input", bad], capsys)[0] == 4
    write_graph(complete_graph(4), tmp_path / "k4.json")
    assert run(["color", "--input", tmp_path / "k4.json", "--D", 2], capsys)[0] == 4


def test_verify_failure(tmp_path, capsys):
    write_graph(complete_graph(3), tmp_path / "k3.json")
    (tmp_path / "col.json").write_text("[1, 1, 2]")
    code, _, err = run(["verify", "--input", tmp_path / "k3.json", "--coloring", tmp_path / "col.json",
                        "--c", 1, "--p", 1, "--D", 3], capsys)
    assert code == 3 and "monochromatic edge" in err


def test_gen_regular_dimacs(tmp_path, capsys):
    code, out, _ = run(["gen", "regular", "--n", 10, "--D", 3, "--seed", 1, "--format", "dimacs"], capsys)
    assert code == 0 and out.startswith("p edge 10 15")


def test_module_entry(tmp_path):
    write_graph(petersen_graph(), tmp_path / "p.json")
    out = subprocess.run([sys.executable, "-m", "ndgcolor", "color", "--input", str(tmp_path / "p.json")],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["status"] == "colored"


def test_trace_logs(tmp_path, capsys):
    write_graph(gen_gnp(30, 0.3, seed=0), tmp_path / "g.json")
    code, _, err = run(["--trace", "color", "--input", tmp_path / "g.json", "--heuristic-p", 5,
                        "--heuristic-q", 3], capsys)
    assert code == 0 and "omega colouring: phi=" in err
    _, _, quiet = run(["color", "--input", tmp_path / "g.json", "--heuristic-p", 5, "--heuristic-q", 3], capsys)
    assert "phi=" not in quiet


@pytest.mark.parametrize("argv", [[], ["nope"]])
def test_usage(argv, capsys):
    with pytest.raises(SystemExit) as err:
        main(argv)
    assert err.value.code == 2
