import csv
import json
import os
import subprocess
from fractions import Fraction

import pytest

BIN = os.environ.get("CFQBC_BIN", "cfqbc")


def run(*args, cwd=None, env=None):
    return subprocess.run([BIN, *args], capture_output=True, text=True, cwd=cwd, env=env)


def test_tables_csv_and_json():
    out = run("tables", "--config", "0.5,0.5,0.5")
    assert out.returncode == 0
    rows = list(csv.DictReader(out.stdout.splitlines()))
    assert len(rows) == 20
    cell = {(r["source"], r["bits_equal"], r["detector"]): r for r in rows}
    assert cell[("bob", "true", "DB0")]["exact"] == "5/16"
    assert cell[("alice", "false", "D0")]["exact"] == "5/16"

    doc = json.loads(run("tables", "--config", "1/3,2/5,3/7", "--format", "json").stdout)
    assert set(doc["column_sums"].values()) == {"1"}
    assert doc["manifest"]["subcommand"] == "tables"


@pytest.mark.parametrize("config", ["0.5,0.5", "0.5,0.5,abc", "0.5,0.5,1.5"])
def test_tables_rejects_bad_config(config):
    assert run("tables", "--config", config).returncode == 1


def test_plan():
    doc = json.loads(run("plan", "--alpha", "1e-6", "--beta", "1e-6").stdout)
    assert (doc["m"], doc["n"]) == (65, 25)
    assert all(s["satisfied"] for s in doc["scenario_assumptions"])
    assert json.loads(run("plan", "--alpha", "0.99", "--beta", "1e-6").stdout)["m"] == 1
    assert run("plan", "--alpha", "0").returncode == 1
    assert run("plan", "--beta", "1").returncode == 1


def test_plan_minimality_at_1e_3():
    doc = json.loads(run("plan", "--alpha", "1e-3", "--beta", "1e-3").stdout)
    p_alter = 21 / 26
    assert p_alter ** doc["m"] < 1e-3 <= p_alter ** (doc["m"] - 1)


def test_verify_oracle():
    out = run("verify-oracle", "--samples", "1000", "--seed", "3")
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["closed_form"]["max_deviation_p_a"] == "0"
    assert doc["closed_form"]["max_deviation_p_b"] == "0"
    assert doc["honest"] == {"p_a": "17/64", "p_b": "53/128"}
    assert run("verify-oracle", "--samples", "0").returncode == 1


def test_fig4(tmp_path):
    target = tmp_path / "surface.csv"
    out = run("fig4", "--resolution", "201", "--out", str(target))
    assert out.returncode == 0
    assert out.stdout.strip() == "max 0.5 at (0,1)"
    rows = list(csv.DictReader(target.open()))
    assert len(rows) == 201 * 201
    center = next(r for r in rows if r["t_B0"] == "0.5" and r["t_B1"] == "0.5")
    assert Fraction(center["p_B"]) == Fraction(53, 128)
    assert (tmp_path / "surface.csv.manifest.json").exists()
    assert run("fig4", "--resolution", "100", "--out", str(target)).returncode == 1


def test_simulate_is_deterministic_and_honest_runs_accept(tmp_path):
    for d in ("a", "b"):
        out = run("simulate", "--m", "65", "--n", "25", "--seed", "11", "--out", str(tmp_path / d))
        assert out.returncode == 0
        assert out.stdout.strip() == "verdict accept"
    for name in ("alice_transcript.jsonl", "bob_transcript.jsonl", "opening.json", "verification.json", "report.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    header = json.loads((tmp_path / "a" / "bob_transcript.jsonl").read_text().splitlines()[0])
    assert header["schema_version"] == 1 and header["manifest"]["flags"]["seed"] == "11"

    verify = run("verify", "--transcript", str(tmp_path / "a" / "bob_transcript.jsonl"),
                 "--opening", str(tmp_path / "a" / "opening.json"))
    assert verify.returncode == 0
    assert json.loads(verify.stdout)["verdict"] == "accept"


def test_simulate_alter_reports_detection(tmp_path):
    out = run("simulate", "--m", "65", "--n", "25", "--seed", "3", "--alice-strategy", "alter", "--out", str(tmp_path))
    assert out.returncode == 2
    report = json.loads((tmp_path / "report.json").read_text())
    alteration = report["alteration"]
    assert alteration["p_alter"] == "75/94"
    assert alteration["accepted"] + alteration["detected"] == 65
    assert len(alteration["per_sequence"]) == 65


def test_output_directory_from_environment(tmp_path):
    env = dict(os.environ, CFQBC_OUTPUT_DIR=str(tmp_path / "env"))
    assert run("simulate", "--m", "2", "--n", "3", env=env).returncode == 0
    assert (tmp_path / "env" / "opening.json").exists()


def test_io_failure_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run("simulate", "--m", "2", "--n", "3", "--out", str(blocker / "sub")).returncode == 3
    assert run("verify", "--transcript", str(tmp_path / "missing"), "--opening", str(tmp_path / "x")).returncode == 3


def test_usage_errors():
    assert run().returncode == 1
    assert run("simulate", "--alice-strategy", "bribe").returncode == 1
    assert run("nonsense").returncode == 1
