import json

import numpy as np
import pytest

import helispin as hs
from helispin.cli import (
    bundled_scenarios,
    dumps_deterministic,
    execute_scenario,
    main,
    parse_scenario,
    parse_sweep,
)
from helispin.errors import ScenarioParseError

PI8 = np.pi / 8.0


def _write(tmp_path, name, tree):
    path = tmp_path / name
    path.write_text(json.dumps(tree), encoding="utf-8")
    return path


def test_run_bundled_scenario_passes(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["run", "eq10_theta_independent", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["all_checks_passed"] is True
    assert report["tool"] == {"name": "helispin", "version": hs.__version__}
    matrix = np.array(
        [[complex(*entry) for entry in row]
         for row in report["results"]["helicity_density"]["matrix"]]
    )
    np.testing.assert_allclose(matrix, [[0.5, -PI8], [-PI8, 0.5]], atol=1e-8)
    assert "PASS" in capsys.readouterr().out


def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["run", "eq11_entropy", "--out", str(a)]) == 0
    assert main(["run", "eq11_entropy", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_convergence_metadata_below_check_tolerance(tmp_path):
    out = tmp_path / "report.json"
    assert main(["run", "eq10_theta_independent", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    delta = report["convergence"]["max_delta"]
    assert 0.0 <= delta < 1e-8
    refined = report["convergence"]["refined_grid"]
    assert refined["n_theta"] == 2 * report["grid"]["n_theta"]


def test_unknown_family_exit_2_no_report(tmp_path):
    scenario = {
        "schema_version": 1,
        "name": "bogus",
        "state": {"family": "no_such_family", "params": {}},
        "outputs": ["spin_density"],
    }
    path = _write(tmp_path, "bogus.json", scenario)
    out = tmp_path / "report.json"
    assert main(["run", str(path), "--out", str(out)]) == 2
    assert not out.exists()


def test_invalid_json_exit_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"schema_version": 1,,}', encoding="utf-8")
    assert main(["run", str(path)]) == 2
    assert "line" in capsys.readouterr().err


def test_schema_violations_exit_2(tmp_path):
    bad_quantity = {
        "schema_version": 1,
        "name": "x",
        "state": {"family": "gaussian_spin_up", "params": {"tau": 1.0}},
        "outputs": ["charm_density"],
    }
    assert main(["run", str(_write(tmp_path, "bad1.json", bad_quantity))]) == 2
    missing_name = {
        "schema_version": 1,
        "state": {"family": "gaussian_spin_up", "params": {"tau": 1.0}},
        "outputs": ["spin_density"],
    }
    assert main(["run", str(_write(tmp_path, "bad2.json", missing_name))]) == 2
    wrong_version = {
        "schema_version": 99,
        "name": "x",
        "state": {"family": "gaussian_spin_up", "params": {"tau": 1.0}},
        "outputs": ["spin_density"],
    }
    assert main(["run", str(_write(tmp_path, "bad3.json", wrong_version))]) == 2


def test_check_failure_exit_1(tmp_path, capsys):
    scenario = {
        "schema_version": 1,
        "name": "impossible",
        "state": {"family": "gaussian_spin_up", "params": {"tau": 1.0}},
        "outputs": ["spin_entropy"],
        "checks": [{"quantity": "spin_entropy", "reference": 1.0, "tol": 1e-8}],
    }
    path = _write(tmp_path, "impossible.json", scenario)
    out = tmp_path / "report.json"
    assert main(["run", str(path), "--out", str(out)]) == 1
    assert "FAIL" in capsys.readouterr().out
    report = json.loads(out.read_text())
    # spin entropy of a pure spin state is 0, a deviation of 1 from the target
    assert abs(report["checks"][0]["deviation"] - 1.0) <= 1e-10


def test_degenerate_state_exit_3(tmp_path):
    scenario = {
        "schema_version": 1,
        "name": "empty_shell",
        "state": {
            "family": "theta_independent_spin_up",
            "params": {"profile": "shell", "p_min": 100.0, "p_max": 101.0},
        },
        "grid": {"r_max": 8.0},
        "outputs": ["helicity_density"],
    }
    assert main(["run", str(_write(tmp_path, "shell.json", scenario))]) == 3


def test_unwritable_report_exit_4(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("file, not a directory")
    out = blocker / "report.json"
    assert main(["run", "eq11_entropy", "--out", str(out)]) == 4


def test_grid_and_mc_overrides(tmp_path):
    out = tmp_path / "report.json"
    rc = main(
        ["run", "eq10_theta_independent", "--out", str(out),
         "--grid", "32,512,16,8.0", "--mc", "20000,99"]
    )
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["grid"] == {"n_r": 32, "n_theta": 512, "n_phi": 16, "r_max": 8.0}
    assert report["mc"]["n_samples"] == 20000
    assert report["mc"]["seed"] == 99
    assert report["mc"]["estimates"]["helicity_density"]["within_bound"] is True


def test_run_scenario_by_explicit_path(tmp_path):
    tree = bundled_scenarios()["eq11_entropy"]
    path = _write(tmp_path, "copy.json", tree)
    out = tmp_path / "r.json"
    assert main(["run", str(path), "--out", str(out)]) == 0


def test_unknown_scenario_name_exit_2(capsys):
    assert main(["run", "definitely_not_bundled"]) == 2
    assert "bundled" in capsys.readouterr().err


def test_tau_sweep_constant_column(tmp_path):
    out = tmp_path / "tau.csv"
    assert main(["sweep", "eq12_tau_sweep", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "state.params.tau,helicity_entropy,status"
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert len(values) == 5
    assert max(values) - min(values) <= 1e-8
    assert all(line.endswith(",ok") for line in lines[1:])


def test_alpha_sweep_varies_and_hits_closed_form(tmp_path):
    out = tmp_path / "alpha.csv"
    assert main(["sweep", "anisotropy_alpha_sweep", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    entropy = [float(r[1]) for r in rows]
    top_left = [float(r[2]) for r in rows]
    # alpha = 0 reproduces the isotropic entropy; alpha = 1 the 2/3 entry
    assert abs(entropy[0] - hs.oracle_spin_up_helicity_entropy()) <= 1e-7
    assert abs(top_left[-1] - 2.0 / 3.0) <= 1e-8
    # anisotropy lowers the helicity entropy monotonically on this family
    assert all(a > b for a, b in zip(entropy, entropy[1:]))
    assert header[-1] == "status"


def test_run_rejects_sweep_file_and_vice_versa():
    assert main(["run", "eq12_tau_sweep"]) == 2
    assert main(["sweep", "eq10_theta_independent"]) == 2


def test_sweep_empty_values_exit_2(tmp_path):
    sweep = {
        "schema_version": 1,
        "name": "empty",
        "scenario": bundled_scenarios()["eq11_entropy"],
        "parameter": {"path": "state.params.tau", "values": []},
        "outputs": ["helicity_entropy"],
    }
    assert main(["sweep", str(_write(tmp_path, "empty.json", sweep))]) == 2


def test_sweep_records_point_errors(tmp_path):
    sweep = {
        "schema_version": 1,
        "name": "partial",
        "scenario": {
            "schema_version": 1,
            "name": "point",
            "state": {"family": "anisotropic_spin_up", "params": {"tau": 1.0, "alpha": 0.0}},
            "outputs": ["helicity_entropy"],
        },
        "parameter": {"path": "state.params.alpha", "values": [0.5, 2.0]},
        "outputs": ["helicity_entropy"],
    }
    out = tmp_path / "partial.csv"
    assert main(["sweep", str(_write(tmp_path, "partial.json", sweep)), "--out", str(out)]) == 1
    lines = out.read_text().splitlines()
    assert lines[1].endswith(",ok")
    assert lines[2].endswith("error:ConfigurationError")
    assert lines[2].split(",")[1] == ""  # failed point has empty cells


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    out = capsys.readouterr().out
    for name in (
        "eq10_theta_independent",
        "eq11_entropy",
        "eq12_tau_sweep",
        "eq15_isotropic_helicity",
        "anisotropy_alpha_sweep",
    ):
        assert name in out
    assert "[sweep]" in out and "[scenario]" in out


def test_plotdata_from_sweep(tmp_path):
    table = tmp_path / "tau.csv"
    assert main(["sweep", "eq12_tau_sweep", "--out", str(table)]) == 0
    series_dir = tmp_path / "series"
    assert main(["plotdata", str(table), "--out", str(series_dir)]) == 0
    series = sorted(series_dir.iterdir())
    assert len(series) == 1
    lines = series[0].read_text().splitlines()
    assert lines[0] == "x,y"
    ys = [float(line.split(",")[1]) for line in lines[1:]]
    assert len(ys) == 5
    # flat line at the closed-form entropy
    assert max(ys) - min(ys) <= 1e-8
    assert abs(ys[0] - hs.oracle_spin_up_helicity_entropy()) <= 1e-7


def test_plotdata_from_report(tmp_path):
    report = tmp_path / "r.json"
    assert main(["run", "eq11_entropy", "--out", str(report)]) == 0
    assert main(["plotdata", str(report), "--out", str(tmp_path)]) == 0
    series = tmp_path / "r__helicity_entropy.csv"
    lines = series.read_text().splitlines()
    assert lines[0] == "x,y"
    assert len(lines) == 2  # single-row series


def test_plotdata_unwritable_exit_4(tmp_path):
    table = tmp_path / "tau.csv"
    assert main(["sweep", "eq12_tau_sweep", "--out", str(table)]) == 0
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    assert main(["plotdata", str(table), "--out", str(blocker / "sub")]) == 4


def test_plotdata_missing_source_exit_2(tmp_path):
    assert main(["plotdata", str(tmp_path / "nope.csv")]) == 2


def test_mc_requires_density_output(tmp_path):
    assert main(["run", "eq11_entropy", "--mc", "5000,1"]) == 2


def test_deterministic_writer_formats():
    text = dumps_deterministic({"b": 0.5, "a": [1, True, None, "x"], "c": {}})
    assert text == '{\n  "a": [\n    1,\n    true,\n    null,\n    "x"\n  ],\n  "b": 0.5,\n  "c": {}\n}\n'


def test_parse_selector_validation(tmp_path):
    sweep = {
        "schema_version": 1,
        "name": "bad_selector",
        "scenario": bundled_scenarios()["eq11_entropy"],
        "parameter": {"path": "state.params.tau", "values": [1.0]},
        "outputs": ["helicity_density[0][2].re"],
    }
    with pytest.raises(ScenarioParseError):
        parse_sweep(sweep)


def test_grid_spec_resolves_width_scaled_r_max():
    scenario = parse_scenario(
        {
            "schema_version": 1,
            "name": "wide",
            "state": {"family": "gaussian_spin_up", "params": {"tau": 2.0}},
            "outputs": ["spin_density"],
        }
    )
    result = execute_scenario(scenario, compute_convergence=False)
    assert result.grid.r_max == 16.0  # 8 widths


def test_sweep_parameter_path_must_exist():
    with pytest.raises(ScenarioParseError, match="does not address"):
        parse_sweep(
            {
                "schema_version": 1,
                "name": "bad_path",
                "scenario": bundled_scenarios()["eq11_entropy"],
                "parameter": {"path": "state.missing.tau", "values": [1.0]},
                "outputs": ["helicity_entropy"],
            }
        )
