import json

import numpy as np
import pytest

from ptkdv import cli
from ptkdv.scenarios import SCENARIO_ORDER, Scenario


def run_cli(args):
    return cli.main(args)


def test_list_has_one_line_per_scenario(capsys):
    assert run_cli(["list"]) == 0
    out = capsys.readouterr().out.strip().split("\n")
    assert len(out) == 7
    assert any("eps3-birth" in ln and "Fig. 4" in ln for ln in out)


def test_list_order_is_stable(capsys):
    run_cli(["list"])
    first = capsys.readouterr().out
    run_cli(["list"])
    second = capsys.readouterr().out
    assert first == second
    names = [ln.split()[0] for ln in first.strip().split("\n")]
    assert tuple(names) == SCENARIO_ORDER


def test_unknown_scenario_is_usage_error(tmp_path, capsys):
    assert run_cli(["run", "no-such-thing", "--out", str(tmp_path)]) == 2


def test_unknown_override_key_is_usage_error(tmp_path):
    assert run_cli(["run", "odd-family", "--set", "resolution=5",
                    "--out", str(tmp_path)]) == 2


def test_malformed_override_is_usage_error(tmp_path):
    assert run_cli(["run", "odd-family", "--set", "n_max",
                    "--out", str(tmp_path)]) == 2


def test_scenario_requires_known_name():
    with pytest.raises(ValueError):
        Scenario("fig7")


def test_console_script_wiring():
    import shutil
    import subprocess

    exe = shutil.which("ptkdv")
    if exe is None:
        pytest.skip("ptkdv entry point not installed")
    proc = subprocess.run([exe, "list"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert len(proc.stdout.strip().split("\n")) == 7


def test_odd_family_run_passes(tmp_path, capsys):
    assert run_cli(["run", "odd-family", "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "odd-family" / "summary.json").read_text())
    assert summary["passed"] is True
    heights = summary["measurements"]["heights"]
    assert heights["1"] == pytest.approx(-2.73802, abs=1e-3)
    assert heights["2"] == pytest.approx(2.45839, abs=1e-3)
    assert heights["3"] == pytest.approx(-2.30305, abs=1e-3)
    assert heights["4"] == pytest.approx(2.20797, abs=1e-3)
    widths = summary["measurements"]["half_widths"]
    for n, ref in (("1", 3.15), ("2", 3.14), ("3", 3.19), ("4", 3.26)):
        assert widths[n] == pytest.approx(ref, abs=0.05)
    for n in "1234":
        assert (tmp_path / "odd-family" / f"profile_n{n}.csv").exists()


def test_kdv_birth_with_zero_horizon(tmp_path):
    assert run_cli(["run", "kdv-soliton-birth", "--set", "T=0",
                    "--out", str(tmp_path)]) == 0
    outdir = tmp_path / "kdv-soliton-birth"
    summary = json.loads((outdir / "summary.json").read_text())
    assert summary["passed"] is True
    rows = (outdir / "snapshot_000.csv").read_text().strip().split("\n")[1:]
    data = np.array([[float(c) for c in r.split(",")] for r in rows])
    expected = 3.0 * 2 * np.exp(-np.abs(data[:, 0])) \
        / (1 + np.exp(-2 * np.abs(data[:, 0])))
    assert np.max(np.abs(data[:, 1] - expected)) < 1e-15


def test_csv_determinism(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert run_cli(["run", "eps3-solitary", "--out", str(out_a)]) == 0
    assert run_cli(["run", "eps3-solitary", "--out", str(out_b)]) == 0
    for name in ("profile_n1.csv", "profile_n1.json"):
        a = (out_a / "eps3-solitary" / name).read_bytes()
        b = (out_b / "eps3-solitary" / name).read_bytes()
        assert a == b


def test_env_var_output_root(tmp_path, monkeypatch):
    monkeypatch.setenv("PTKDV_OUT", str(tmp_path / "from-env"))
    monkeypatch.chdir(tmp_path)
    assert run_cli(["run", "odd-family", "--set", "n_max=1"]) == 0
    assert (tmp_path / "from-env" / "odd-family" / "summary.json").exists()


def test_parallel_flag_matches_sequential(tmp_path):
    assert run_cli(["run", "odd-family", "--parallel", "--set", "n_max=2",
                    "--out", str(tmp_path / "par")]) == 0
    assert run_cli(["run", "odd-family", "--set", "n_max=2",
                    "--out", str(tmp_path / "seq")]) == 0
    par = (tmp_path / "par" / "odd-family" / "profile_n2.csv").read_bytes()
    seq = (tmp_path / "seq" / "odd-family" / "profile_n2.csv").read_bytes()
    assert par == seq


@pytest.mark.slow
def test_eps0_linear_scenario_passes(tmp_path):
    assert run_cli(["run", "eps0-linear", "--out", str(tmp_path)]) == 0
    outdir = tmp_path / "eps0-linear"
    summary = json.loads((outdir / "summary.json").read_text())
    assert summary["passed"] is True
    names = {c["name"] for c in summary["checks"]}
    assert {"phase_modulus_invariance", "evolve_vs_exact_linf"} <= names
    # six caption frames, complex carrier from t > 0
    rows = (outdir / "snapshot_001.csv").read_text().split("\n", 1)[0]
    assert rows == "x,re_u,im_u"
    assert (outdir / "snapshot_005.csv").exists()


@pytest.mark.slow
def test_conservation_suite_scenario_passes(tmp_path):
    assert run_cli(["run", "conservation-suite", "--out", str(tmp_path)]) == 0
    summary = json.loads(
        (tmp_path / "conservation-suite" / "summary.json").read_text())
    assert summary["passed"] is True
    by_name = {c["name"]: c for c in summary["checks"]}
    assert by_name["kdv_soliton_linf_t10"]["value"] < 1e-4
    assert by_name["series_vs_airy_rel"]["value"] < 1e-8
    assert 12.0 <= summary["measurements"]["dt_halving_ratio"] <= 20.0


def test_eps3_birth_reports_singularity(tmp_path, capsys):
    # the Fig. 4 run cannot reach its caption horizon; the scenario must
    # report the singularity and exit nonzero
    code = run_cli(["run", "eps3-birth", "--out", str(tmp_path)])
    assert code == 1
    summary = json.loads((tmp_path / "eps3-birth" / "summary.json").read_text())
    assert summary["passed"] is False
    assert 1.1 < summary["measurements"]["blow_up_time"] < 1.3
    drift_checks = [c for c in summary["checks"] if "drift" in c["name"]]
    assert drift_checks and all(c["passed"] for c in drift_checks)
    assert any(not c["passed"] and "reached_caption_horizon" == c["name"]
               for c in summary["checks"])
