"""
End-to-end tests of the command-line pipeline: analyze, simulate,
reconstruct and validate-model, their reports and exit codes.
"""

import json
import math
import os
import sys

import pytest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from conftest import FIXTURES_DIR
from src.main import build_parser, cmd_analyze, cmd_reconstruct, cmd_simulate, cmd_validate_model, main, simulated_data
from src.models.experiment_models import ExperimentConfig, RunReport
from src.models.measurement_models import MeasurementRecord
from src.utils.data_access import load_experiment_config, load_measurements, save_measurements

REFERENCE_CONFIG = {
    "dimension": 2,
    "hamiltonian": "sigma_y",
    "projectors": [
        {"label": "M1", "components": [[-1.0, 0.0], [2.0, 0.0]]},
        {"label": "M2", "components": [[2.0, 0.0], [0.0, 1.0]]}
    ],
    "times": [0.0, math.pi / 4],
    "truth": {"components": [[1.0, 0.0], [0.0, 0.0]]},
    "data_model": "factored"
}


def _fixture(name):
    return str(FIXTURES_DIR / name / "config.json")


def _write_config(tmp_path, **updates):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({**REFERENCE_CONFIG, **updates}), encoding="utf-8")
    return str(path)


def _write_data(tmp_path, rows):
    path = tmp_path / "data.json"
    save_measurements([MeasurementRecord(projector_label=label, time=t, value=v) for label, t, v in rows], path)
    return str(path)


def _read_report(path):
    with open(path, encoding="utf-8") as f:
        return RunReport.from_json(f.read())


# ============================================================================
# analyze
# ============================================================================

def test_analyze_reference_qubit():
    results = cmd_analyze(load_experiment_config(_fixture("qubit-sigma-y"))).results
    assert results["mu"] == 2
    assert results["times"] == pytest.approx([0.0, math.pi / 4])
    assert results["abs_det_lambda"] == pytest.approx(0.5)
    assert results["lambda_invertible"] is True
    assert results["frame_size"] == 4
    assert results["spanning"]["spans"] is True
    assert results["injectivity"]["status"] == "Injective"
    assert results["injectivity"]["advisory_4d4"] is True


def test_analyze_selects_times_automatically():
    results = cmd_analyze(load_experiment_config(_fixture("qubit-sigma-y-auto"))).results
    assert results["times"] == pytest.approx([0.0, math.pi / 2])
    assert results["abs_det_lambda"] == pytest.approx(1.0)


def test_analyze_identity_single_projector():
    results = cmd_analyze(load_experiment_config(_fixture("identity-single"))).results
    assert results["mu"] == 1
    assert results["spanning"] == {"spans": False, "rank": 1, "defect_dimension": 1}
    assert results["injectivity"]["status"] == "NonInjective"


def test_analyze_diagonal_single_projector():
    results = cmd_analyze(load_experiment_config(_fixture("diag-1-2-single"))).results
    assert results["times"] == pytest.approx([0.0, math.pi])
    assert results["spanning"]["spans"] is True
    assert results["injectivity"]["status"] == "NonInjective"
    assert results["injectivity"]["nullspace_dimension"] == 2


# ============================================================================
# simulate / reconstruct
# ============================================================================

def test_simulate_reference_values():
    results = cmd_simulate(load_experiment_config(_fixture("qubit-sigma-y"))).results
    assert results["data_model"] == "factored"
    assert [r["value"] for r in results["exact"]] == pytest.approx([0.2, 0.1, 0.8, 0.5], abs=1e-12)
    assert [r["value"] for r in results["factored"]] == pytest.approx([0.2, 0.5, 0.8, 0.5], abs=1e-12)


def test_simulate_then_reconstruct_closed_form(tmp_path):
    config = _fixture("qubit-sigma-y")
    data = str(tmp_path / "data.json")
    report_path = str(tmp_path / "report.json")
    assert main(["simulate", "--config", config, "--data", data, "--out", str(tmp_path / "sim.json")]) == 0
    assert len(load_measurements(data)) == 4
    assert main(["reconstruct", "--config", config, "--data", data, "--out", report_path]) == 0

    results = _read_report(report_path).results
    assert results["method"] == "paper-qubit-closed-form"
    assert results["fidelity_to_truth"] > 1 - 1e-10
    assert results["diagnostics"]["injectivity"]["status"] == "Injective"


def test_simulate_then_reconstruct_exact_fit_with_shots(tmp_path):
    config = _fixture("qubit-sigma-y-auto")
    data = str(tmp_path / "data.json")
    report_path = str(tmp_path / "report.json")
    assert main(["simulate", "--config", config, "--data", data, "--out", str(tmp_path / "sim.json")]) == 0
    assert all(record.shots == 1000000 for record in load_measurements(data))
    assert main(["reconstruct", "--config", config, "--data", data, "--out", report_path]) == 0

    results = _read_report(report_path).results
    assert results["method"] == "exact-fit"
    assert results["fidelity_to_truth"] > 0.999


def test_mode_override(tmp_path):
    config = _write_config(tmp_path, data_model="exact")
    data = str(tmp_path / "data.json")
    report_path = str(tmp_path / "report.json")
    assert main(["simulate", "--config", config, "--data", data, "--out", str(tmp_path / "sim.json")]) == 0
    assert main(["reconstruct", "--config", config, "--data", data, "--mode", "exact-fit", "--out", report_path]) == 0
    report = _read_report(report_path)
    assert report.config_echo["mode"] == "exact-fit"
    assert report.results["method"] == "exact-fit"
    assert report.results["fidelity_to_truth"] > 1 - 1e-8


def test_report_goes_to_stdout_without_out(capsys):
    assert main(["analyze", "--config", _fixture("qubit-sigma-y")]) == 0
    report = RunReport.from_json(capsys.readouterr().out)
    assert report.command == "analyze"
    assert report.versions.schema_version == "1.0.0"


def test_seed_override_is_echoed(tmp_path):
    out = str(tmp_path / "report.json")
    assert main(["analyze", "--config", _fixture("qubit-sigma-y"), "--seed", "5", "--out", out]) == 0
    assert _read_report(out).config_echo["seed"] == 5


def test_reports_are_byte_identical_across_runs(tmp_path):
    config = _fixture("qubit-sigma-y-auto")
    outputs = []
    for run in range(2):
        out = tmp_path / f"sim{run}.json"
        assert main(["simulate", "--config", config, "--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


# ============================================================================
# validate-model
# ============================================================================

def test_validate_model_reference(tmp_path):
    out = str(tmp_path / "report.json")
    assert main(["validate-model", "--config", _fixture("qubit-sigma-y"), "--out", out]) == 0
    results = _read_report(out).results
    assert results["grid"]["points"] == 101
    assert results["max_discrepancy"] == pytest.approx(0.4, abs=1e-10)
    assert results["per_projector"]["M2"]["max"] == pytest.approx(0.0, abs=1e-12)


def test_validate_model_identity_has_no_discrepancy(tmp_path):
    out = str(tmp_path / "report.json")
    assert main(["validate-model", "--config", _fixture("identity-single"), "--out", out]) == 0
    assert _read_report(out).results["max_discrepancy"] == pytest.approx(0.0, abs=1e-12)


def test_validate_model_eigenstate_has_no_discrepancy(tmp_path):
    out = str(tmp_path / "report.json")
    assert main(["validate-model", "--config", _fixture("qubit-sigma-y-eigenstate"), "--out", out]) == 0
    results = _read_report(out).results
    assert results["max_discrepancy"] == pytest.approx(0.0, abs=1e-12)
    for label in ("M1", "M2"):
        assert results["per_projector"][label]["max"] == pytest.approx(0.0, abs=1e-12)


def test_simulate_eigenstate_is_stationary():
    results = cmd_simulate(load_experiment_config(_fixture("qubit-sigma-y-eigenstate"))).results
    assert [r["value"] for r in results["exact"]] == pytest.approx([0.5, 0.5, 0.9, 0.9], abs=1e-12)
    assert [r["value"] for r in results["factored"]] == pytest.approx([0.5, 0.5, 0.9, 0.9], abs=1e-12)


def test_reconstruct_eigenstate_from_exact_data(tmp_path):
    config = _fixture("qubit-sigma-y-eigenstate")
    data = str(tmp_path / "data.json")
    report_path = str(tmp_path / "report.json")
    assert main(["simulate", "--config", config, "--data", data, "--out", str(tmp_path / "sim.json")]) == 0
    assert main(["reconstruct", "--config", config, "--data", data, "--out", report_path]) == 0
    results = _read_report(report_path).results
    assert results["fidelity_to_truth"] > 1 - 1e-10
    assert results["diagnostics"]["model_discrepancy_max"] == pytest.approx(0.0, abs=1e-12)


# ============================================================================
# Exit codes
# ============================================================================

@pytest.mark.parametrize("case", ["invalid_dimension", "invalid_shots"])
def test_invalid_configs_exit_2(case):
    assert main(["analyze", "--config", _fixture(case)]) == 2


def test_missing_config_and_malformed_json_exit_2(tmp_path):
    assert main(["analyze", "--config", str(tmp_path / "missing.json")]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text('{"dimension": 2,', encoding="utf-8")
    assert main(["analyze", "--config", str(broken)]) == 2


def test_commands_needing_truth_exit_2(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({k: v for k, v in REFERENCE_CONFIG.items() if k != "truth"}), encoding="utf-8")
    assert main(["simulate", "--config", str(config)]) == 2
    assert main(["validate-model", "--config", str(config)]) == 2


def test_reconstruct_without_data_exits_2():
    assert main(["reconstruct", "--config", _fixture("qubit-sigma-y")]) == 2


def test_missing_data_file_exits_3(tmp_path):
    assert main(["reconstruct", "--config", _fixture("qubit-sigma-y"), "--data", str(tmp_path / "none.json")]) == 3


def test_data_for_unknown_projector_exits_3(tmp_path):
    data = _write_data(tmp_path, [("M1", 0.0, 0.2), ("M3", 0.0, 0.2)])
    assert main(["reconstruct", "--config", _fixture("qubit-sigma-y"), "--data", data]) == 3


def test_data_at_other_times_exits_3(tmp_path):
    data = _write_data(tmp_path, [("M1", 0.0, 0.2), ("M1", 0.5, 0.1), ("M2", 0.0, 0.8), ("M2", 0.5, 0.5)])
    assert main(["reconstruct", "--config", _fixture("qubit-sigma-y"), "--data", data]) == 3


def test_data_missing_a_configured_time_exits_3(tmp_path):
    data = _write_data(tmp_path, [("M1", 0.0, 0.2), ("M2", 0.0, 0.8)])
    assert main(["reconstruct", "--config", _write_config(tmp_path, mode="exact-fit"), "--data", data]) == 3


def test_singular_lambda_exits_4(tmp_path):
    config = _write_config(tmp_path, times=[0.0, math.pi])
    data = str(tmp_path / "data.json")
    assert main(["simulate", "--config", config, "--data", data, "--out", str(tmp_path / "sim.json")]) == 0
    assert main(["reconstruct", "--config", config, "--data", data]) == 4


def test_deficient_frame_exits_5(tmp_path):
    config = _fixture("identity-single")
    data = str(tmp_path / "data.json")
    assert main(["simulate", "--config", config, "--data", data, "--out", str(tmp_path / "sim.json")]) == 0
    assert main(["reconstruct", "--config", config, "--data", data]) == 5


def test_non_convergence_exits_6(tmp_path):
    t = math.pi / 4
    config = _write_config(tmp_path, mode="exact-fit")
    data = _write_data(tmp_path, [("M1", 0.0, 1.0), ("M1", t, 1.0), ("M2", 0.0, 1.0), ("M2", t, 1.0)])
    assert main(["reconstruct", "--config", config, "--data", data]) == 6


def test_inconsistent_intensities_exit_7(tmp_path):
    t = math.pi / 4
    data = _write_data(tmp_path, [("M1", 0.0, 0.5), ("M1", t, 0.5), ("M2", 0.0, 1.0), ("M2", t, 0.5)])
    assert main(["reconstruct", "--config", _write_config(tmp_path), "--data", data]) == 7


def test_no_invertible_times_exits_8(tmp_path):
    config = _write_config(tmp_path, times={"auto": {"horizon": 2 * math.pi, "grid": 2}})
    assert main(["analyze", "--config", config]) == 8


def test_parser_rejects_unknown_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["frobnicate", "--config", "x.json"])


# ============================================================================
# Schemas
# ============================================================================

@pytest.mark.parametrize("case", [
    "qubit-sigma-y", "qubit-sigma-y-auto", "qubit-sigma-y-eigenstate", "identity-single", "diag-1-2-single"
])
def test_config_schema_round_trip(case):
    config = load_experiment_config(_fixture(case))
    assert ExperimentConfig.model_validate(config.model_dump(mode="json")) == config


def test_run_report_round_trip():
    report = cmd_simulate(load_experiment_config(_fixture("qubit-sigma-y")))
    text = report.to_json()
    assert RunReport.from_json(text).to_json() == text
    assert json.loads(text)["versions"]["schema"] == "1.0.0"


def test_commands_called_directly(tmp_path):
    config = load_experiment_config(_fixture("qubit-sigma-y"))
    data = tmp_path / "data.json"
    save_measurements(simulated_data(cmd_simulate(config)), data)

    reconstruction = cmd_reconstruct(config, str(data))
    assert reconstruction.command == "reconstruct"
    assert reconstruction.results["fidelity_to_truth"] > 1 - 1e-10
    assert reconstruction.results["diagnostics"]["det_lambda"] == pytest.approx(0.5)

    validation = cmd_validate_model(config)
    assert validation.command == "validate-model"
    assert validation.results["max_discrepancy"] == pytest.approx(0.4, abs=1e-10)
