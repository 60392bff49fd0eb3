import json
import subprocess
import sys

import pytest

from p2pheal.cli import main
from p2pheal.graph import DegreeHistogram, read_edgelist
from p2pheal.powerlaw import fit_powerlaw


def test_generate_preferential(tmp_path, capsys):
    assert main(["generate", "--kind", "preferential", "--peers", "1000", "--n", "2", "--seed", "7",
                 "--out", str(tmp_path)]) == 0
    g = read_edgelist(tmp_path / "graph.edgelist")
    assert g.n_peers == 1000
    hist = DegreeHistogram.from_csv(tmp_path / "histogram.csv")
    assert hist == g.histogram()


def test_generate_config_fit(tmp_path):
    assert main(["generate", "--kind", "config", "--theta", "2.4", "--dcap", "300", "--peers", "50000",
                 "--out", str(tmp_path)]) == 0
    fit = fit_powerlaw(DegreeHistogram.from_csv(tmp_path / "histogram.csv"), 1)
    assert abs(fit.exponent - 2.4) <= 0.1


def test_missing_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--kind", "preferential"])
    assert exc.value.code == 2
    assert "--peers" in capsys.readouterr().err


def test_config_generator_needs_theta(tmp_path, capsys):
    assert main(["generate", "--kind", "config", "--peers", "100", "--out", str(tmp_path)]) == 2
    assert "--theta" in capsys.readouterr().err


def test_attack_heal_analyze_chain(tmp_path, capsys):
    main(["generate", "--kind", "config", "--theta", "2.4", "--dcap", "100", "--peers", "3000", "--seed", "1",
          "--out", str(tmp_path)])
    assert main(["attack", "--graph", str(tmp_path / "graph.edgelist"), "--k0", "15", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "attack.json").read_text())
    assert doc["removed_peers"] > 0 and doc["edge_loss_events"]
    assert read_edgelist(tmp_path / "attacked.edgelist").max_degree() <= 15

    assert main(["heal", "--graph", str(tmp_path / "attacked.edgelist"), "--alpha", "2.4", "--beta", "2",
                 "--out", str(tmp_path / "s")]) == 0
    assert json.loads((tmp_path / "s" / "heal.json").read_text())["edges_added"] >= 0
    assert main(["heal", "--graph", str(tmp_path / "attacked.edgelist"), "--alpha", "2.4", "--beta", "2",
                 "--events", str(tmp_path / "attack.json"), "--out", str(tmp_path / "f")]) == 0
    assert (tmp_path / "f" / "post_hist.csv").read_text().startswith("degree,count")

    capsys.readouterr()
    assert main(["analyze", str(tmp_path / "s" / "healed.edgelist")]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["n_peers"] < 3000 and doc["fit"]["exponent"] > 1


def test_heal_invalid_beta_exit_2(tmp_path):
    (tmp_path / "g.edgelist").write_text("0 1\n")
    assert main(["heal", "--graph", str(tmp_path / "g.edgelist"), "--alpha", "2.4", "--beta", "0.5",
                 "--out", str(tmp_path)]) == 2


def test_missing_graph_file_exit_1(tmp_path):
    assert main(["analyze", str(tmp_path / "nope.edgelist")]) == 1


def test_churn_csv(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["churn", "--r", "0.1", "--steps", "500", "--trials", "3", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "r,n,steps,seed,g,final_peers" and len(lines) == 4


def test_restore_sweep(tmp_path):
    (tmp_path / "g.edgelist").write_text("0 1\n2 3\n3 4\n5\n6\n7 8\n")
    out = tmp_path / "r.csv"
    assert main(["restore", "--graph", str(tmp_path / "g.edgelist"), "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 22


def test_reproduce_table1_smoke(tmp_path, capsys):
    assert main(["reproduce", "table1", "--trials", "1", "--steps", "100", "--out", str(tmp_path)]) == 0
    assert len((tmp_path / "table1.csv").read_text().splitlines()) == 1 + 6
    assert "monotone" in capsys.readouterr().out


def test_reproduce_figures_files(tmp_path):
    assert main(["reproduce", "figures", "--trials", "5", "--peers", "3000", "--dcap", "80",
                 "--out", str(tmp_path)]) == 0
    figs = sorted(p.name for p in tmp_path.glob("fig_*.csv"))
    assert len(figs) == 12
    assert "fig_2.4_2.csv" in figs and "fig_3.2_20.csv" in figs


def test_pipeline_exit_codes(tmp_path, capsys):
    cfg = tmp_path / "ok.json"
    cfg.write_text(json.dumps({
        "generator": {"kind": "preferential", "n_peers": 2000, "n": 2},
        "attack": {"k0": 20},
        "heal": {"alpha": 2.4, "beta": 2},
        "restore": {"p_step": 0.05},
        "trials": 2,
    }))
    assert main(["pipeline", str(cfg), "--out", str(tmp_path / "run")]) == 0
    assert sorted(p.name for p in (tmp_path / "run" / "trials").iterdir()) == ["0.json", "1.json"]
    assert len((tmp_path / "run" / "restore.csv").read_text().splitlines()) == 1 + 2 * 21

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"churn": {"r": 0.1}, "attack": {"k0": 3}}))
    capsys.readouterr()
    assert main(["pipeline", str(bad)]) == 2
    assert "contradictory" in capsys.readouterr().err

    broken = tmp_path / "broken.json"
    broken.write_text('{"trials": 1,\n "heal": }')
    assert main(["pipeline", str(broken)]) == 2
    assert "broken.json:2" in capsys.readouterr().err
    assert main(["pipeline", str(tmp_path / "missing.json")]) == 2


def test_pipeline_flag_overrides_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"churn": {"r": 0.05, "steps": 200}, "trials": 1}))
    assert main(["pipeline", str(cfg), "--trials", "3", "--out", str(tmp_path / "o")]) == 0
    assert len((tmp_path / "o" / "churn.csv").read_text().splitlines()) == 4


def test_module_entry_point_help():
    res = subprocess.run([sys.executable, "-m", "p2pheal", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "restore CSV" in res.stdout and "pipeline" in res.stdout
