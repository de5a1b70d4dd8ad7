import json

import numpy as np
import pytest

from collective_stopping.cli import run


def base_config(**over):
    cfg = {
        "schema_version": 1,
        "prior": 0.5,
        "grid": {"n": 64, "delta": 0.001},
        "process": {"type": "diffusion", "sigma": 1.0},
        "players": [
            {"u": {"points": [[0.0, 1.0], [0.5, 0.0], [1.0, 1.0]]}, "c": 0.02},
            {"u": {"points": [[0.0, 0.8], [0.4, 0.0], [1.0, 1.0]]}, "c": 0.02},
        ],
        "rule": {"type": "unilateral"},
    }
    cfg.update(over)
    return cfg


def write_config(tmp_path, cfg, name="game.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return str(path)


def test_check_pass_and_fail_exit_codes(tmp_path, capsys):
    cfg = write_config(tmp_path, base_config())
    # no-learning region: certifies under unilateral stopping
    out = tmp_path / "cert.json"
    code = run(["check", "--config", cfg, "--region", "0.49,0.51",
                "--out", str(out)])
    doc = json.loads(out.read_text())
    if code == 0:
        assert doc["verdict"] == "pass"
    else:
        assert code == 2 and doc["verdict"] == "fail"
    # a concave player wants to stop inside any wide region: certification
    # fails and the exit code flags it
    bad = base_config()
    bad["players"][1]["u"] = {"points": [[0.0, 0.0], [0.5, 1.0], [1.0, 0.0]]}
    cfg_fail = write_config(tmp_path, bad, name="fail.json")
    code = run(["check", "--config", cfg_fail, "--region", "0.05,0.95",
                "--out", str(out)])
    assert code == 2
    assert json.loads(out.read_text())["verdict"] == "fail"


def test_bad_config_is_input_error(tmp_path, capsys):
    cfg = base_config()
    del cfg["prior"]
    path = write_config(tmp_path, cfg)
    code = run(["check", "--config", path, "--region", "0.4,0.6"])
    assert code == 1
    assert "$" in capsys.readouterr().err  # JSON-pointer-ish path reported


def test_schema_rejects_bad_prior(tmp_path, capsys):
    path = write_config(tmp_path, base_config(prior=1.5))
    code = run(["check", "--config", path, "--region", "0.4,0.6"])
    assert code == 1
    err = capsys.readouterr().err
    assert "prior" in err


def test_region_roundtrip_through_json(tmp_path):
    from collective_stopping.cli import build_game, load_config, parse_region
    path = write_config(tmp_path, base_config())
    game = build_game(load_config(path))
    region = parse_region(game, "0.3,0.45;0.55,0.7")
    doc = [[lo, hi] for lo, hi in region.intervals()]
    rfile = tmp_path / "region.json"
    rfile.write_text(json.dumps(doc), encoding="utf-8")
    again = parse_region(game, str(rfile))
    assert again == region


def test_enumerate_writes_deterministic_csv(tmp_path):
    cfg = write_config(tmp_path, base_config())
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert run(["enumerate", "--config", cfg, "--out", str(out1)]) == 0
    assert run(["enumerate", "--config", cfg, "--out", str(out2)]) == 0
    assert (out1 / "regions.csv").read_bytes() == (out2 / "regions.csv").read_bytes()
    assert (out1 / "closures.csv").read_bytes() == (out2 / "closures.csv").read_bytes()
    header = (out1 / "closures.csv").read_text().splitlines()[0]
    assert header.split(",")[:5] == ["p", "u1", "phi1", "net1", "V1"]


def test_solve_emits_solution_and_svg(tmp_path):
    cfg = write_config(tmp_path, base_config())
    out = tmp_path / "sol"
    assert run(["solve", "--config", cfg, "--out", str(out), "--svg"]) == 0
    doc = json.loads((out / "solution.json").read_text())
    assert "efficient_region" in doc
    svg = (out / "solution.svg").read_text()
    assert svg.lstrip().startswith("<?xml")


def test_war_symmetric_solution(tmp_path, capsys):
    out = tmp_path / "war.json"
    assert run(["war", "--c1", "0.1", "--c2", "0.1", "--n", "257",
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    cell = (1 - 2e-4) / 256
    assert abs(doc["g_star"] - (1 - doc["G_star"])) <= cell + 1e-9


def test_committee_subcommand(tmp_path):
    cfg = base_config()
    cfg["committee"] = {"v": [0.5, 1.0, 2.0], "piv": 2, "c": 0.05,
                        "rule": {"type": "quota", "q": 2}, "n": 256}
    path = write_config(tmp_path, cfg)
    out = tmp_path / "committee.json"
    assert run(["committee", "--config", path, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["lower_pivot"] == 2 and doc["upper_pivot"] == 2
    assert any(fp["status"] == "strong" for fp in doc["fixed_points"])


def test_poisson_subcommand(tmp_path):
    cfg = base_config(process={"type": "poisson", "lambda": 1.0},
                      rule={"type": "unanimity"})
    cfg["players"] = [
        {"u": {"points": [[0.0, 0.6], [0.5, 0.0], [1.0, 1.0]]}, "c": 0.05},
        {"u": {"points": [[0.0, 0.6], [0.5, 0.0], [1.0, 1.0]]}, "c": 0.05},
    ]
    path = write_config(tmp_path, cfg)
    out = tmp_path / "poisson.json"
    code = run(["poisson", "--config", path, "--out", str(out)])
    assert code in (0, 2)
    doc = json.loads(out.read_text())
    assert "passing_bounds" in doc


def test_simulate_subcommand(tmp_path):
    cfg = base_config()
    cfg["simulate"] = {"n_paths": 500, "dt": 0.001, "seed": 4, "max_time": 5.0}
    path = write_config(tmp_path, cfg)
    out = tmp_path / "sim.json"
    assert run(["simulate", "--config", path, "--region", "0.3,0.7",
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["n_paths"] == 500
    assert len(doc["mean_terminal"]) == 2


def test_compare_subcommand(tmp_path):
    cfg = base_config()
    cfg["compare"] = {
        "axis": "misalignment",
        "f": {"points": [[0.0, 1.0], [0.5, 0.0], [1.0, 1.0]]},
        "g": {"points": [[0.0, 0.3], [0.6, -0.2], [1.0, 0.1]]},
        "b": [0.0, 0.2, 0.5],
        "c": 0.03,
    }
    path = write_config(tmp_path, cfg)
    out = tmp_path / "cmp.json"
    assert run(["compare", "--config", path, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["ok"] is True


def test_committee_payoff_config_form(tmp_path):
    cfg = base_config()
    cfg["players"] = [
        {"u": {"type": "committee", "v": 0.5, "w_piv": 0.5}, "c": 0.05},
        {"u": {"type": "committee", "v": 2.0, "w_piv": 0.5}, "c": 0.05},
    ]
    path = write_config(tmp_path, cfg)
    out = tmp_path / "cert.json"
    code = run(["check", "--config", path, "--region", "0.45,0.55",
                "--out", str(out)])
    assert code in (0, 2)
