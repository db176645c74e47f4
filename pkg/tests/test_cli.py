import json
import subprocess
import sys

import pytest

from anisqg.cli import main
from anisqg.persistence import parse_diagnostics, read_checkpoint

CONFIG = """\
grid = 32
alpha = 0.5
beta = 0.6
t_end = 0.05
dt = 1e-3
initial_condition = random(seed=3, kmax=8)
diagnostics_every = 10
"""


@pytest.fixture
def cfg(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(CONFIG)
    return path


def test_simulate_writes_header_and_records(cfg, tmp_path):
    out = tmp_path / "diag.jsonl"
    ck = tmp_path / "final.bin"
    assert main(["simulate", "--config", str(cfg), "--out", str(out), "--checkpoint", str(ck)]) == 0
    header, records, trailers = parse_diagnostics(out.read_text())
    assert header["config"]["alpha"] == 0.5 and header["admissibility"]["admissible"] is True
    assert header["exploratory"] is False
    assert len(records) == 6 and trailers == []
    assert read_checkpoint(ck).t == pytest.approx(0.05)


def test_simulate_deterministic(cfg, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    main(["simulate", "--config", str(cfg), "--out", str(a)])
    main(["simulate", "--config", str(cfg), "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_simulate_resume_from_checkpoint(cfg, tmp_path):
    ck = tmp_path / "half.bin"
    half = tmp_path / "half.cfg"
    half.write_text(CONFIG.replace("t_end = 0.05", "t_end = 0.02"))
    assert main(["simulate", "--config", str(half), "--out", str(tmp_path / "h.jsonl"), "--checkpoint", str(ck)]) == 0
    resume = tmp_path / "resume.cfg"
    resume.write_text(CONFIG.replace("random(seed=3, kmax=8)", f"from_checkpoint(path={ck})"))
    assert main(["simulate", "--config", str(resume), "--out", str(tmp_path / "r.jsonl")]) == 0
    main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "s.jsonl")])
    r = parse_diagnostics((tmp_path / "r.jsonl").read_text())[1][-1]
    s = parse_diagnostics((tmp_path / "s.jsonl").read_text())[1][-1]
    assert r.t == pytest.approx(s.t) and abs(r.l2 - s.l2) <= 1e-12 * s.l2


def test_config_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text(CONFIG + "cfl_factor = 0.5\n")
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path / "x")]) == 2
    assert f"{bad}:8:" in capsys.readouterr().err


def test_missing_checkpoint_exit_2(tmp_path):
    c = tmp_path / "c.cfg"
    c.write_text(CONFIG.replace("random(seed=3, kmax=8)", "from_checkpoint(path=/nonexistent.bin)"))
    assert main(["simulate", "--config", str(c), "--out", str(tmp_path / "x")]) == 2


def test_admissible(capsys):
    assert main(["admissible", "--alpha", "0.5", "--beta", "0.6"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["admissible"] is True and out["regime"] == "low-alpha"
    assert main(["admissible", "--alpha", "0.3", "--beta", "0.5"]) == 0
    assert json.loads(capsys.readouterr().out)["admissible"] is False
    assert main(["admissible", "--alpha", "1.5", "--beta", "0.5"]) == 2


def test_verify_inequalities(tmp_path):
    out = tmp_path / "ineq.jsonl"
    args = ["verify-inequalities", "--case", "commutator", "--samples", "3", "--resolutions", "32,64", "--seed", "1"]
    assert main([*args, "--out", str(out)]) == 0
    summary = json.loads(out.read_text())
    assert summary["case"] == "commutator" and summary["samples"] == 6 and summary["violations"] == []
    again = tmp_path / "again.jsonl"
    main([*args, "--out", str(again)])
    assert out.read_bytes() == again.read_bytes()


def test_verify_inequalities_all(tmp_path):
    out = tmp_path / "all.jsonl"
    assert main(["verify-inequalities", "--case", "all", "--samples", "2", "--resolutions", "32", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 9


def test_verify_gronwall_preset(tmp_path):
    out = tmp_path / "g.jsonl"
    assert main(["verify-gronwall", "--preset", "closed-form-decay", "--trials", "2", "--out", str(out)]) == 0
    lines = [json.loads(x) for x in out.read_text().splitlines()]
    assert lines[-1] == {"trials": 2, "sound": 2}
    assert all(line["sound"] for line in lines[:-1])


def test_verify_gronwall_config(tmp_path):
    c = tmp_path / "g.cfg"
    c.write_text("gamma = 2\nalpha_g = 1.5\nbeta_g = 0.3\nC1 = 1\nK = 0.5\nn = constant(0.5)\n")
    out = tmp_path / "g.jsonl"
    assert main(["verify-gronwall", "--config", str(c), "--trials", "1", "--out", str(out)]) == 0


def test_verify_gronwall_bad_config_exit_2(tmp_path):
    c = tmp_path / "g.cfg"
    c.write_text("gamma = 2\nalpha_g = 1.5\nbeta_g = 0.9\nC1 = 1\n")
    assert main(["verify-gronwall", "--config", str(c), "--out", str(tmp_path / "o")]) == 2


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "anisqg.cli", "admissible", "--alpha", "0.75", "--beta", "0.2"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["regime"] == "high-alpha-small-beta"
