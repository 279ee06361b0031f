import json

import pytest

from chancepareto.cli import main
from chancepareto.instance import load_instance


def test_generate_run_certify(tmp_path, capsys):
    inst = tmp_path / "inst.txt"
    rec = tmp_path / "run.txt"
    assert main(["generate", "instance", "--n", "8", "--seed", "1", "-o", str(inst)]) == 0
    assert load_instance(inst).n == 8
    assert main(["run", "--instance", str(inst), "--budget", "200000", "--seed", "4", "-o", str(rec)]) == 0
    out = tmp_path / "cert.txt"
    code = main(["certify", str(rec), "--record", "--instance", str(inst), "--betas", "0.1,1e-16", "-o", str(out)])
    text = out.read_text()
    assert code == 0 and text.rstrip().endswith("CERTIFIED: 0 failing queries")


def test_certify_fails_on_poor_archive(tmp_path):
    inst = tmp_path / "inst.txt"
    rec = tmp_path / "run.txt"
    main(["generate", "instance", "--n", "8", "--seed", "1", "-o", str(inst)])
    main(["run", "--instance", str(inst), "--budget", "1", "--init", "all-zeros", "-o", str(rec)])
    assert main(["certify", str(rec), "--record", "--instance", str(inst), "-o", str(tmp_path / "c")]) == 1


def test_graph_commands(tmp_path, capsys):
    g = tmp_path / "g.txt"
    assert main(["generate", "graph", "--n", "10", "--d", "3", "-o", str(g)]) == 0
    capsys.readouterr()
    assert main(["graph-summary", str(g)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["n"] == 10 and summary["m"] == 15
    inst = tmp_path / "i.txt"
    assert main(["generate", "instance", "--graph", str(g), "--setting", "degree-based", "-o", str(inst)]) == 0
    rec = tmp_path / "r.txt"
    assert main(["run", "--algorithm", "GSEMO2D", "--instance", str(inst), "--graph", str(g),
                 "--budget", "500", "-o", str(rec)]) == 0
    assert "algorithm=GSEMO2D" in rec.read_text()


def test_experiment_command(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("runs = 1\nbudget = 300\ngraph_n = 12\ngraph_d = 3\nalgorithms = GSEMO2D, GSEMO3D\n")
    out, runs = tmp_path / "r.md", tmp_path / "runs.csv"
    assert main(["experiment", str(cfg), "--format", "markdown", "-o", str(out), "--runs-output", str(runs)]) == 0
    assert out.read_text().startswith("### ")
    assert runs.read_text().startswith("algorithm,run,seed")


def test_stats_command(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    a.write_text("1 2 3\n")
    b.write_text("4,5,6\n")
    assert main(["stats", str(a), str(b)]) == 0
    assert capsys.readouterr().out.strip() == "0.1"


def test_bad_arguments():
    with pytest.raises(SystemExit):
        main(["run"])
    with pytest.raises(SystemExit):
        main(["frobnicate"])
