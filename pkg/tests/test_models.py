"""
Tests for configuration models, settings and file access.
"""

import json
import math
import os
import sys

import numpy as np
import pytest
from pydantic import ValidationError

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.errors import ConfigError, DataMismatch
from src.models.experiment_models import AutoTimesSpec, ExperimentConfig, parse_diag_preset
from src.models.frame_models import InjectivityStatus, InjectivityVerdict
from src.models.measurement_models import MeasurementRecord
from src.models.reconstruction_models import IntensityVector, LambdaMatrix
from src.settings import get_settings, reset_settings
from src.utils.data_access import (
    ExperimentStore,
    build_hamiltonian,
    build_projectors,
    build_truth,
    dump_measurements,
    load_measurements,
    parse_experiment_config,
    resolve_times,
    save_measurements
)
from src.utils.spectral_utils import minimal_polynomial

BASE = {
    "dimension": 2,
    "hamiltonian": "sigma_y",
    "projectors": [{"label": "M1", "components": [[-1.0, 0.0], [2.0, 0.0]]}],
    "times": [0.0, 0.5]
}


def _config(**updates):
    return ExperimentConfig.model_validate({**BASE, **updates})


# ============================================================================
# Experiment configuration
# ============================================================================

def test_config_defaults():
    config = _config()
    assert config.shots == "exact"
    assert config.seed == 0
    assert config.mode == "factored"
    assert config.data_model == "exact"


@pytest.mark.parametrize("updates", [
    {"hamiltonian": "sigma_w"},
    {"hamiltonian": "diag:[1, 2, 3]"},
    {"dimension": 3},
    {"dimension": 1},
    {"shots": 0},
    {"seed": -1},
    {"times": []},
    {"mode": "guess"},
    {"projectors": []},
    {"projectors": [{"label": "A", "components": [[1, 0], [0, 0]]}, {"label": "A", "components": [[0, 0], [1, 0]]}]},
    {"projectors": [{"label": "A", "components": [[1, 0]]}]},
    {"truth": {"components": [[1, 0], [0, 0]], "bloch": {"theta": 0.0}}},
    {"truth": {}},
    {"unexpected": 1}
])
def test_config_rejects_invalid_input(updates):
    with pytest.raises(ValidationError):
        _config(**updates)


def test_bloch_truth_requires_qubit():
    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate({
            **BASE,
            "dimension": 3,
            "hamiltonian": "diag:[0, 1, 2]",
            "projectors": [{"label": "P", "components": [[1, 0], [1, 0], [1, 0]]}],
            "truth": {"bloch": {"theta": 1.0}}
        })


def test_dense_hamiltonian_and_auto_times():
    config = _config(
        hamiltonian=[[[0, 0], [0, -1]], [[0, 1], [0, 0]]],
        times={"auto": {"horizon": math.pi, "grid": 64}}
    )
    assert isinstance(config.times, AutoTimesSpec)
    H = build_hamiltonian(config)
    assert np.allclose(H.entries, [[0, -1j], [1j, 0]])
    assert resolve_times(config, minimal_polynomial(H)) == pytest.approx([0.0, math.pi / 2])


def test_diag_preset_parsing():
    assert parse_diag_preset("diag:[1, 2.5]") == [1.0, 2.5]
    assert parse_diag_preset("sigma_x") is None
    for malformed in ("diag:[1, ", "diag:", "diag:5", "diag:[]", "diag:[1, \"a\"]"):
        with pytest.raises(ValueError):
            parse_diag_preset(malformed)
    with pytest.raises(ValidationError):
        _config(hamiltonian="diag:[1, ")


def test_build_objects_from_config():
    config = _config(truth={"bloch": {"theta": math.pi / 2, "phi": 0.0}})
    projector = build_projectors(config)[0]
    assert np.allclose(projector.direction.components, np.array([-1, 2]) / math.sqrt(5))
    assert np.allclose(build_truth(config).components, np.array([1, 1]) / math.sqrt(2))
    assert build_truth(_config()) is None


def test_non_hermitian_dense_hamiltonian_is_a_config_error():
    config = _config(hamiltonian=[[[0, 0], [1, 0]], [[0, 0], [0, 0]]])
    with pytest.raises(ConfigError):
        build_hamiltonian(config)


def test_zero_projector_is_a_config_error():
    config = _config(projectors=[{"label": "Z", "components": [[0, 0], [0, 0]]}])
    with pytest.raises(ConfigError):
        build_projectors(config)


def test_parse_errors_name_the_location():
    with pytest.raises(ConfigError, match="line 1"):
        parse_experiment_config('{"dimension": 2,')
    with pytest.raises(ConfigError, match="shots"):
        parse_experiment_config(json.dumps({**BASE, "shots": -5}))


def test_store_overrides_revalidate(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(BASE), encoding="utf-8")
    store = ExperimentStore(path)
    assert store.load_config() is store.load_config()
    assert store.override(seed=9, mode=None).seed == 9
    with pytest.raises(ConfigError):
        store.override(mode="guess")


# ============================================================================
# Measurement files
# ============================================================================

def test_measurement_file_round_trip(tmp_path):
    records = [
        MeasurementRecord(projector_label="M1", time=0.0, value=0.2),
        MeasurementRecord(projector_label="M1", time=0.5, value=0.31, shots=1000, model="exact")
    ]
    path = tmp_path / "nested" / "data.json"
    save_measurements(records, path)
    assert load_measurements(path) == records
    assert path.read_text(encoding="utf-8") == dump_measurements(records)


def test_malformed_measurement_file(tmp_path):
    path = tmp_path / "data.json"
    path.write_text(json.dumps([{"projector_label": "M1", "time": 0.0, "value": 1.5}]), encoding="utf-8")
    with pytest.raises(DataMismatch):
        load_measurements(path)


@pytest.mark.parametrize("fields", [
    {"value": -0.1},
    {"value": 1.1},
    {"shots": 0},
    {"projector_label": ""},
    {"model": "other"}
])
def test_measurement_record_validation(fields):
    with pytest.raises(ValidationError):
        MeasurementRecord.model_validate({"projector_label": "M1", "time": 0.0, "value": 0.5, **fields})


# ============================================================================
# Result models
# ============================================================================

def test_lambda_matrix_validation():
    with pytest.raises(ValidationError):
        LambdaMatrix(entries=[[1.0, 0.0]], times=[0.0, 1.0])
    with pytest.raises(ValidationError):
        LambdaMatrix(entries=[[1.0, -0.5]], times=[0.0])
    with pytest.raises(ValidationError):
        LambdaMatrix(entries=[[1.0, 0.0], [1.0]], times=[0.0, 1.0])


def test_intensity_vector_validation():
    iv = IntensityVector(values={"M1": [0.2, 0.8], "M2": [0.8, 0.2]})
    assert list(iv.values) == ["M1", "M2"]
    with pytest.raises(ValidationError):
        IntensityVector(values={"M1": [-0.1, 0.2]})
    with pytest.raises(ValidationError):
        IntensityVector(values={})


def test_injectivity_verdict_consistency():
    with pytest.raises(ValidationError):
        InjectivityVerdict(status=InjectivityStatus.NON_INJECTIVE, nullspace_dimension=1)
    verdict = InjectivityVerdict(status="Undetermined", nullspace_dimension=1)
    assert verdict.status == InjectivityStatus.UNDETERMINED
    assert verdict.advisory_4d4 is False


# ============================================================================
# Settings
# ============================================================================

def test_settings_defaults():
    settings = get_settings()
    assert settings.injectivity_attempts == 64
    assert settings.rank_relative_tolerance == 1e-10
    assert settings.exact_fit_random_starts == 8
    assert get_settings() is settings


def test_settings_read_environment(monkeypatch):
    monkeypatch.setenv("STROBO_INJECTIVITY_ATTEMPTS", "3")
    monkeypatch.setenv("STROBO_LOG_LEVEL", "DEBUG")
    reset_settings()
    assert get_settings().injectivity_attempts == 3
    assert get_settings().log_level == "DEBUG"


def test_settings_reject_invalid_environment(monkeypatch):
    monkeypatch.setenv("STROBO_REFINE_ITERATIONS", "-1")
    reset_settings()
    with pytest.raises(ValidationError):
        get_settings()
