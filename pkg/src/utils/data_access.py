"""
File access for experiments: JSON configuration files, measurement data
files and run reports. Configuration entries are turned into the domain
objects (Hamiltonian, projectors, ground truth, time instants) here.
"""

import json
import logging
import os
from pathlib import Path
from typing import List, Optional, Sequence, Union
import numpy as np
from pydantic import TypeAdapter, ValidationError

from src.errors import ConfigError, DataMismatch, StroboscopicError
from src.models.state_models import StateVector, HermitianOperator, Projector
from src.models.measurement_models import MeasurementRecord
from src.models.experiment_models import ExperimentConfig, RunReport, AutoTimesSpec, parse_diag_preset
from src.models.spectral_models import MinimalPolynomialInfo
from src.utils.state_utils import bloch_to_state, make_state
from src.utils.spectral_utils import as_hermitian
from src.utils.reconstruction_utils import select_times

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

PRESET_MATRICES = {
    "sigma_x": [[0, 1], [1, 0]],
    "sigma_y": [[0, -1j], [1j, 0]],
    "sigma_z": [[1, 0], [0, -1]]
}

_records_adapter = TypeAdapter(List[MeasurementRecord])


def _format_validation_error(error: ValidationError) -> str:
    """One 'field.path: message' entry per problem."""
    parts = []
    for issue in error.errors():
        location = ".".join(str(part) for part in issue["loc"]) or "<root>"
        parts.append(f"{location}: {issue['msg']}")
    return "; ".join(parts)


def _read_text(path: PathLike, error_type: type) -> str:
    if not os.path.exists(path):
        raise error_type(f"File not found: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()


def parse_experiment_config(text: str, source: str = "<config>") -> ExperimentConfig:
    """
    Parse and validate configuration text.

    Raises:
        ConfigError: With the JSON line/column or the offending field path
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"{source}: {_format_validation_error(e)}") from None


def load_experiment_config(path: PathLike) -> ExperimentConfig:
    """Load and validate a configuration file."""
    return parse_experiment_config(_read_text(path, ConfigError), source=str(path))


def build_hamiltonian(config: ExperimentConfig) -> HermitianOperator:
    """
    The Hamiltonian named or listed in the configuration.

    Raises:
        ConfigError: If dense entries are not Hermitian
    """
    spec = config.hamiltonian
    if isinstance(spec, str):
        diagonal = parse_diag_preset(spec)
        matrix = np.diag(diagonal) if diagonal is not None else np.array(PRESET_MATRICES[spec])
    else:
        pairs = np.asarray(spec, dtype=float)
        matrix = pairs[..., 0] + 1j * pairs[..., 1]
    try:
        return as_hermitian(matrix)
    except StroboscopicError as e:
        raise ConfigError(f"hamiltonian: {e}") from None


def _pairs_to_vector(pairs: Sequence[Sequence[float]]) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    return arr[:, 0] + 1j * arr[:, 1]


def build_projectors(config: ExperimentConfig) -> List[Projector]:
    """Projectors in configuration order; directions are normalized."""
    projectors = []
    for index, spec in enumerate(config.projectors):
        try:
            direction = make_state(_pairs_to_vector(spec.components))
        except StroboscopicError as e:
            raise ConfigError(f"projectors.{index}.components: {e}") from None
        projectors.append(Projector(direction=direction, label=spec.label))
    return projectors


def build_truth(config: ExperimentConfig) -> Optional[StateVector]:
    """Ground-truth initial state, normalized, or None."""
    if config.truth is None:
        return None
    try:
        if config.truth.bloch is not None:
            return bloch_to_state((config.truth.bloch.theta, config.truth.bloch.phi))
        return make_state(_pairs_to_vector(config.truth.components))
    except StroboscopicError as e:
        raise ConfigError(f"truth: {e}") from None


def resolve_times(config: ExperimentConfig, info: MinimalPolynomialInfo) -> List[float]:
    """Explicit time instants, or the automatic grid search result."""
    if isinstance(config.times, AutoTimesSpec):
        return select_times(info, config.times.auto.horizon, config.times.auto.grid)
    return [float(t) for t in config.times]


class ExperimentStore:
    """Lazily loaded experiment configuration with command-line overrides."""

    def __init__(self, config_path: PathLike):
        """Initialize the store with the configuration path."""
        self.config_path = config_path
        self._config: Optional[ExperimentConfig] = None

    def load_config(self) -> ExperimentConfig:
        """Load and validate the configuration on first use."""
        if self._config is None:
            self._config = load_experiment_config(self.config_path)
            logger.debug(f"Loaded configuration {self.config_path}")
        return self._config

    def override(self, **updates) -> ExperimentConfig:
        """Apply CLI overrides (seed, mode) and re-validate."""
        merged = {**self.load_config().model_dump(), **{k: v for k, v in updates.items() if v is not None}}
        try:
            self._config = ExperimentConfig.model_validate(merged)
        except ValidationError as e:
            raise ConfigError(f"{self.config_path}: {_format_validation_error(e)}") from None
        return self._config


def load_measurements(path: PathLike) -> List[MeasurementRecord]:
    """
    Read a data file: a JSON list of measurement records.

    Raises:
        DataMismatch: If the file is missing or malformed
    """
    text = _read_text(path, DataMismatch)
    try:
        return _records_adapter.validate_json(text)
    except ValidationError as e:
        raise DataMismatch(f"{path}: {_format_validation_error(e)}") from None


def dump_measurements(records: Sequence[MeasurementRecord]) -> str:
    """Records as indented JSON with a trailing newline."""
    payload = [record.model_dump(mode="json") for record in records]
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def save_measurements(records: Sequence[MeasurementRecord], path: PathLike) -> None:
    """Write a data file readable by load_measurements."""
    _write_text(dump_measurements(records), path)


def save_report(report: RunReport, path: PathLike) -> None:
    """Write a report file."""
    _write_text(report.to_json(), path)


def _write_text(text: str, path: PathLike) -> None:
    directory = os.path.dirname(os.fspath(path))
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)


# Export main functions
__all__ = [
    'PRESET_MATRICES',
    'parse_experiment_config',
    'load_experiment_config',
    'build_hamiltonian',
    'build_projectors',
    'build_truth',
    'resolve_times',
    'ExperimentStore',
    'load_measurements',
    'dump_measurements',
    'save_measurements',
    'save_report'
]
