import json
import math
from pathlib import Path

from kappamech import cli

REPO_ROOT = Path(__file__).resolve().parents[1]


def _write_config(path, **overrides):
    cfg = {
        "system": {"family": "aniso_oscillator", "kappa": 0.0, "params": {"omega": 1.0, "gamma": "1"}},
        "chart": "parallel",
        "initial_state": {"coords": [0.3, -0.2], "momenta": [0.4, 0.7]},
        "t_end": 2 * math.pi,
        "integrator": {"rel_tol": 1e-11, "abs_tol": 1e-13, "max_step": 0.2},
        "integrals": ["H_xi", "X_real", "Y_real"],
        "outputs": {"directory": str(path.parent / "out"), "sample_dt": 0.05},
        "seed": 7,
    }
    cfg.update(overrides)
    path.write_text(json.dumps(cfg, indent=1), encoding="utf-8")
    return cfg


def test_simulate_period_run(tmp_path, capsys):
    cfg_path = tmp_path / "run.json"
    _write_config(cfg_path)
    assert cli.main(["simulate", "--config", str(cfg_path)]) == 0
    out = tmp_path / "out"
    for name in ("trajectory.csv", "trajectory.json", "summary.json", "plotdata.json",
                 "trajectory.png", "conservation.png"):
        assert (out / name).exists(), name
    summary = json.loads((out / "summary.json").read_text())
    assert summary["final_distance_to_start"] < 1e-6
    header = (out / "trajectory.csv").read_text().splitlines()[0]
    assert header == "t,x,y,px,py,H,H_xi,X_real,Y_real"


def test_simulate_outputs_are_deterministic(tmp_path):
    cfg_path = tmp_path / "run.json"
    _write_config(cfg_path, outputs={"directory": str(tmp_path / "a"), "sample_dt": 0.05, "plots": False})
    assert cli.main(["simulate", "--config", str(cfg_path)]) == 0
    _write_config(cfg_path, outputs={"directory": str(tmp_path / "b"), "sample_dt": 0.05, "plots": False})
    assert cli.main(["simulate", "--config", str(cfg_path)]) == 0
    for name in ("trajectory.csv", "trajectory.json", "summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_simulate_rejects_unknown_field(tmp_path, capsys):
    cfg_path = tmp_path / "run.json"
    _write_config(
        cfg_path,
        system={"family": "aniso_oscillator", "kappa": 0.0, "params": {"omega": 1.0, "gama": 2}},
    )
    assert cli.main(["simulate", "--config", str(cfg_path)]) == 1
    assert "gama" in capsys.readouterr().err


def test_simulate_rejects_out_of_domain_start(tmp_path, capsys):
    cfg_path = tmp_path / "run.json"
    _write_config(
        cfg_path,
        system={"family": "aniso_oscillator", "kappa": 1.0, "params": {"omega": 1.0, "gamma": "1"}},
        initial_state={"coords": [0.1, math.pi / 2], "momenta": [0.0, 0.0]},
    )
    assert cli.main(["simulate", "--config", str(cfg_path)]) == 1
    assert "y" in capsys.readouterr().err


def test_simulate_malformed_json_reports_line(tmp_path, capsys):
    cfg_path = tmp_path / "run.json"
    cfg_path.write_text('{\n  "system": {,}\n}\n', encoding="utf-8")
    assert cli.main(["simulate", "--config", str(cfg_path)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_simulate_boundary_abort_exit_code(tmp_path, capsys):
    cfg_path = tmp_path / "run.json"
    _write_config(
        cfg_path,
        system={"family": "free", "kappa": 1.0, "params": {}},
        initial_state={"coords": [0.0, 0.0], "momenta": [0.0, 1.0]},
        t_end=3.0,
        integrals=[],
        outputs={"directory": str(tmp_path / "out"), "plots": False},
    )
    assert cli.main(["simulate", "--config", str(cfg_path)]) == 2
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["boundary_event"]


def test_simulate_drift_threshold_exit_code(tmp_path):
    cfg_path = tmp_path / "run.json"
    _write_config(
        cfg_path,
        integrator={"rel_tol": 1e-8, "abs_tol": 1e-10, "max_step": 0.3},
        drift_threshold=1e-16,
        outputs={"directory": str(tmp_path / "out"), "plots": False},
    )
    assert cli.main(["simulate", "--config", str(cfg_path)]) == 3


def test_simulate_format_flag_restricts_outputs(tmp_path):
    cfg_path = tmp_path / "run.json"
    _write_config(cfg_path, t_end=1.0, outputs={"directory": str(tmp_path / "out"), "plots": False})
    assert cli.main(["simulate", "--config", str(cfg_path), "--format", "json"]) == 0
    assert (tmp_path / "out" / "trajectory.json").exists()
    assert not (tmp_path / "out" / "trajectory.csv").exists()


def test_simulate_with_implicit_method(tmp_path):
    cfg_path = tmp_path / "run.json"
    _write_config(
        cfg_path,
        t_end=2.0,
        integrator={"method": "gauss4_implicit", "max_step": 0.01},
        drift_threshold=1e-6,
        outputs={"directory": str(tmp_path / "out"), "plots": False},
    )
    assert cli.main(["simulate", "--config", str(cfg_path)]) == 0
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["drift"]["H"] < 1e-7


def test_catalog_lists_families_and_caveats(capsys):
    assert cli.main(["catalog"]) == 0
    text = capsys.readouterr().out
    assert "henon_heiles_kdv_curved" in text
    assert "I_hh_kdv" in text
    assert text.count("none shipped") >= 2  # the two cubic families without integrals
    assert "second integral: open" in text


def test_verify_structure_small(tmp_path, capsys):
    assert cli.main(["verify", "structure", "--n", "10", "--seed", "3", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "verify_structure.json").read_text())
    assert report["all_pass"] is True


def test_verify_reports_are_deterministic(tmp_path):
    for sub in ("r1", "r2"):
        assert (
            cli.main(["verify", "brackets", "--n", "10", "--seed", "7", "--out", str(tmp_path / sub)])
            == 0
        )
    a = (tmp_path / "r1" / "verify_brackets.json").read_bytes()
    b = (tmp_path / "r2" / "verify_brackets.json").read_bytes()
    assert a == b


def test_closure_command(tmp_path, capsys):
    cfg_path = tmp_path / "base.json"
    _write_config(
        cfg_path,
        initial_state={"coords": [0.2, -0.15], "momenta": [0.1, 0.2]},
        integrals=[],
        integrator={"rel_tol": 1e-10, "abs_tol": 1e-12, "max_step": 0.3},
    )
    rc = cli.main(
        ["closure", "--config", str(cfg_path), "--gamma", "1", "--gamma", "2", "--out", str(tmp_path)]
    )
    assert rc == 0
    rows = json.loads((tmp_path / "closure.json").read_text())
    assert [r["closed"] for r in rows] == [True, True]
    assert abs(rows[0]["period"] - 2 * math.pi) < 1e-4


def test_limit_sweep_command(tmp_path, capsys):
    cfg_path = tmp_path / "base.json"
    _write_config(cfg_path, t_end=5.0, integrals=[])
    rc = cli.main(
        [
            "limit-sweep",
            "--config",
            str(cfg_path),
            "--kappa", "1e-2",
            "--kappa", "1e-3",
            "--out", str(tmp_path / "sweep"),
        ]
    )
    assert rc == 0
    table = json.loads((tmp_path / "sweep" / "sweep.json").read_text())
    assert table["monotone"] is True
    assert (tmp_path / "sweep" / "sweep.png").exists()


def test_run_config_schema_ships_and_parses():
    schema = json.loads((REPO_ROOT / "docs" / "run_config.schema.json").read_text())
    assert schema["title"].startswith("kappa-mech")
    assert set(schema["properties"]) == {
        "system", "chart", "initial_state", "t_end", "integrator",
        "integrals", "outputs", "seed", "drift_threshold",
    }
