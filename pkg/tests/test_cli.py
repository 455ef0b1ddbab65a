import json
import os
import shutil

import pytest

from debrisplan.cli import (EXIT_CONFIG, EXIT_DATA, EXIT_MISSING, EXIT_OK,
                            main)
from tests.conftest import FIXTURE_CSV


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """Shared pipeline directory: mesh and plan are built once."""
    root = tmp_path_factory.mktemp("cli")
    catalog = root / "debris.csv"
    shutil.copy(FIXTURE_CSV, catalog)
    config = root / "config.json"
    config.write_text(json.dumps({
        "missions": 2,
        "debris_per_mission": 3,
        "total_duration_days": 600,
        "mode": "high",
        "vehicle_mass": 2000.0,
        "exhaust_velocity": 3000.0,
        "sa": {"max_tries": 100000, "stagnation_levels": 20,
               "init_walks": 30, "init_tries": 1500},
    }))
    mesh = root / "mesh.bin"
    plan = root / "plan.json"
    assert main(["mesh", "--config", str(config), "--debris", str(catalog),
                 "--out", str(mesh), "--threads", "2"]) == EXIT_OK
    assert main(["plan", "--config", str(config), "--debris", str(catalog),
                 "--mesh", str(mesh), "--out", str(plan)]) == EXIT_OK
    return root


def test_mesh_artifact_exists(workdir):
    assert (workdir / "mesh.bin").stat().st_size > 0


def test_plan_artifact_schema(workdir):
    plan = json.loads((workdir / "plan.json").read_text())
    assert plan["version"] == 1
    assert plan["m"] == 2 and plan["n"] == 3
    assert len(plan["order_ids"]) == 21
    assert len(plan["dates_days"]) == 21
    assert plan["cost"] == pytest.approx(max(plan["mission_costs"]))
    assert sorted(plan["order_index"]) == list(range(21))


def test_plan_deterministic(workdir):
    out = workdir / "plan_again.json"
    assert main(["plan", "--config", str(workdir / "config.json"),
                 "--debris", str(workdir / "debris.csv"),
                 "--mesh", str(workdir / "mesh.bin"),
                 "--out", str(out)]) == EXIT_OK
    assert out.read_bytes() == (workdir / "plan.json").read_bytes()


def test_seed_override_changes_result(workdir):
    out = workdir / "plan_seed9.json"
    assert main(["plan", "--config", str(workdir / "config.json"),
                 "--debris", str(workdir / "debris.csv"),
                 "--mesh", str(workdir / "mesh.bin"),
                 "--out", str(out), "--seed", "9"]) == EXIT_OK
    seeded = json.loads(out.read_text())
    assert seeded["seed"] == 9


def test_refine_end_to_end(workdir):
    out = workdir / "missionplan.json"
    assert main(["refine", "--config", str(workdir / "config.json"),
                 "--debris", str(workdir / "debris.csv"),
                 "--plan", str(workdir / "plan.json"),
                 "--out", str(out), "--threads", "2"]) == EXIT_OK
    mp = json.loads(out.read_text())
    assert mp["version"] == 1
    assert len(mp["missions"]) == 2
    for mission in mp["missions"]:
        assert mission["mass_ok"]
        assert len(mission["legs"]) == 3
    # byte-determinism of the refine stage
    out2 = workdir / "missionplan2.json"
    main(["refine", "--config", str(workdir / "config.json"),
          "--debris", str(workdir / "debris.csv"),
          "--plan", str(workdir / "plan.json"),
          "--out", str(out2), "--threads", "1"])
    assert out.read_bytes() == out2.read_bytes()


def test_report_renders_all_artifacts(workdir, capsys):
    for name in ("mesh.bin", "plan.json"):
        assert main(["report", "--input", str(workdir / name)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "cost mesh" in out
    assert "annealed program" in out


def test_missing_input_exit_code(workdir, capsys):
    code = main(["plan", "--config", str(workdir / "config.json"),
                 "--debris", str(workdir / "debris.csv"),
                 "--mesh", str(workdir / "nope.bin")])
    assert code == EXIT_MISSING
    assert "missing input" in capsys.readouterr().err


def test_config_error_exit_code(workdir, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"mode": "warp"}))
    code = main(["mesh", "--config", str(bad),
                 "--debris", str(workdir / "debris.csv"),
                 "--out", str(tmp_path / "m.bin")])
    assert code == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_unknown_config_key_rejected(workdir, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"missons": 3}))
    code = main(["mesh", "--config", str(bad),
                 "--debris", str(workdir / "debris.csv"),
                 "--out", str(tmp_path / "m.bin")])
    assert code == EXIT_CONFIG


def test_data_error_exit_code(workdir, tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("id,altitude_km,inclination_deg,raan_deg\n1,700,200,0\n")
    code = main(["mesh", "--config", str(workdir / "config.json"),
                 "--debris", str(bad), "--out", str(tmp_path / "m.bin")])
    assert code == EXIT_DATA
    assert "data error" in capsys.readouterr().err


def test_tsp_subcommand(tmp_path, capsys):
    inst = tmp_path / "grid9.tsp"
    pts = [(i % 3 * 100.0, i // 3 * 100.0) for i in range(9)]
    inst.write_text(
        "NAME : grid9\nDIMENSION : 9\nEDGE_WEIGHT_TYPE : EUC_2D\n"
        "NODE_COORD_SECTION\n"
        + "".join(f"{i + 1} {x} {y}\n" for i, (x, y) in enumerate(pts))
        + "EOF\n")
    code = main(["tsp", "--instance", str(inst), "--max-tries", "20000",
                 "--best-known", "941", "--out", str(tmp_path / "tour.json")])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "grid9" in out and "gap" in out
    tour = json.loads((tmp_path / "tour.json").read_text())
    assert sorted(tour["tour"]) == list(range(9))
    # closed-tour optimum on the 3x3 grid: eight unit edges plus one
    # diagonal, 800 + round(100 sqrt(2)) = 941
    assert tour["length"] == 941
