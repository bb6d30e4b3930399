import os

import pytest

from viscmhd.cli import main


def test_run_contact_smoke(tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["run", "--problem", "contact", "--cells", "20",
                 "--tfinal", "0.002", "--out", str(out)])
    assert code == 0
    assert (out / "profile.csv").exists()
    assert (out / "ledger.csv").exists()
    assert (out / "manifest.json").exists()
    assert (out / "config.toml").exists()
    assert "run complete" in capsys.readouterr().out


def test_run_config_file_with_override(tmp_path):
    cfgfile = tmp_path / "contact.toml"
    cfgfile.write_text('problem = "contact"\ncells = [20]\nt_final = 0.002\n')
    out = tmp_path / "run"
    code = main(["run", "--config", str(cfgfile), "--flux", "gp",
                 "--out", str(out)])
    assert code == 0


def test_run_p2_lumped_rejected(tmp_path, capsys):
    code = main(["run", "--problem", "contact", "--degree", "2",
                 "--mass", "lumped", "--out", str(tmp_path)])
    assert code == 1
    assert "lumped" in capsys.readouterr().err


def test_run_unknown_flux_rejected(tmp_path, capsys):
    code = main(["run", "--problem", "contact", "--flux", "magic",
                 "--out", str(tmp_path)])
    assert code == 1


def test_run_blowup_exit_code(tmp_path, capsys):
    code = main(["run", "--problem", "briowu", "--cells", "50",
                 "--visc", "none", "--cfl", "10.0", "--tfinal", "1.0",
                 "--out", str(tmp_path)])
    assert code == 2
    assert "abort" in capsys.readouterr().err


def test_verify_rotation_suite(capsys):
    code = main(["verify", "--suite", "rotation", "--samples", "5"])
    assert code == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out.replace("PASS/FAIL", "")


def test_ledger_summary(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["run", "--problem", "contact", "--cells", "20",
                 "--tfinal", "0.002", "--out", str(out)]) == 0
    capsys.readouterr()
    code = main(["ledger", str(out / "ledger.csv")])
    assert code == 0
    text = capsys.readouterr().out
    assert "mass" in text and "drift" in text


def test_ledger_missing_file(capsys):
    assert main(["ledger", "/nonexistent/ledger.csv"]) == 1


def test_convergence_vortex_smoke(capsys):
    code = main(["convergence", "--problem", "vortex", "--levels", "2",
                 "--base-cells", "4,4", "--tfinal", "0.02"])
    assert code == 0
    out = capsys.readouterr().out
    assert "dofs" in out and "rate" in out


def test_convergence_unsupported_problem(capsys):
    code = main(["convergence", "--problem", "gem", "--levels", "2"])
    assert code == 1
