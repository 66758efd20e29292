"""
Pydantic models for experiment configuration files and run reports.
"""

import json
import math
import re
from typing import Any, Dict, List, Literal, Optional, Tuple, Union
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

ComplexPair = Tuple[float, float]

NAMED_PRESETS = ("sigma_x", "sigma_y", "sigma_z")
_DIAG_PRESET = re.compile(r"^diag:(.*)$")


def parse_diag_preset(spec: str) -> Optional[List[float]]:
    """
    Parse a 'diag:[...]' preset into its diagonal entries.

    Args:
        spec: Preset string

    Returns:
        Diagonal entries, or None if the string is not a diag preset
    """
    match = _DIAG_PRESET.match(spec.strip())
    if match is None:
        return None
    try:
        entries = json.loads(match.group(1))
    except json.JSONDecodeError as e:
        raise ValueError(f"Malformed diag preset '{spec}': {e}")
    if not isinstance(entries, list) or not entries or not all(isinstance(x, (int, float)) for x in entries):
        raise ValueError(f"diag preset must list real numbers, got '{spec}'")
    return [float(x) for x in entries]


class ProjectorSpec(BaseModel):
    """A labelled projector direction as [re, im] pairs."""
    model_config = ConfigDict(extra="forbid")

    label: str = Field(..., min_length=1, description="Projector identifier")
    components: List[ComplexPair] = Field(..., min_length=1, description="Direction |i>, normalized on load")


class AutoTimes(BaseModel):
    """Grid search settings for automatic time selection."""
    model_config = ConfigDict(extra="forbid")

    horizon: float = Field(..., gt=0, description="Search interval (0, horizon]")
    grid: int = Field(..., ge=1, description="Number of uniform grid points")


class AutoTimesSpec(BaseModel):
    """Wrapper matching the {"auto": {...}} form of the times field."""
    model_config = ConfigDict(extra="forbid")

    auto: AutoTimes


class BlochSpec(BaseModel):
    """Qubit state given by its Bloch angles."""
    model_config = ConfigDict(extra="forbid")

    theta: float = Field(..., description="Polar angle in [0, π]")
    phi: float = Field(default=0.0, description="Azimuthal angle")


class TruthSpec(BaseModel):
    """Ground-truth initial state, by components or by Bloch angles."""
    model_config = ConfigDict(extra="forbid")

    components: Optional[List[ComplexPair]] = Field(None, description="Amplitudes as [re, im] pairs")
    bloch: Optional[BlochSpec] = Field(None, description="Bloch angles (d = 2 only)")

    @model_validator(mode='after')
    def validate_choice(self) -> 'TruthSpec':
        """Exactly one representation must be given."""
        if (self.components is None) == (self.bloch is None):
            raise ValueError("truth needs exactly one of 'components' or 'bloch'")
        return self


class ValidationGrid(BaseModel):
    """Time grid scanned by validate-model."""
    model_config = ConfigDict(extra="forbid")

    horizon: float = Field(default=math.pi, gt=0, description="Scan [0, horizon]")
    points: int = Field(default=101, ge=2, description="Number of grid points")


class ExperimentConfig(BaseModel):
    """Complete description of a stroboscopic tomography experiment."""
    model_config = ConfigDict(extra="forbid")

    dimension: int = Field(..., ge=2, description="Hilbert space dimension d")
    hamiltonian: Union[str, List[List[ComplexPair]]] = Field(
        ...,
        description="Dense [re, im] entries or a preset: sigma_x | sigma_y | sigma_z | diag:[...]"
    )
    projectors: List[ProjectorSpec] = Field(..., min_length=1, description="Measured projectors")
    times: Union[List[float], AutoTimesSpec] = Field(..., description="Explicit instants or {auto: {horizon, grid}}")
    truth: Optional[TruthSpec] = Field(None, description="Ground-truth initial state")
    shots: Union[int, Literal["exact"]] = Field(default="exact", description="Shots per record or 'exact'")
    seed: int = Field(default=0, ge=0, description="Seed for every random draw")
    mode: Literal["factored", "exact-fit"] = Field(default="factored", description="Reconstruction mode")
    data_model: Literal["exact", "factored"] = Field(
        default="exact",
        description="Forward model written to the data file by simulate"
    )
    injectivity_attempts: Optional[int] = Field(None, ge=1, description="Override for the witness search starts")
    validation: Optional[ValidationGrid] = Field(None, description="Grid for validate-model")

    @field_validator('hamiltonian')
    @classmethod
    def validate_preset(cls, v: Union[str, List]) -> Union[str, List]:
        """String Hamiltonians must name a known preset."""
        if isinstance(v, str):
            if v not in NAMED_PRESETS and parse_diag_preset(v) is None:
                raise ValueError(f"Unknown Hamiltonian preset '{v}'. Use one of {', '.join(NAMED_PRESETS)} or diag:[...]")
        return v

    @field_validator('shots')
    @classmethod
    def validate_shots(cls, v: Union[int, str]) -> Union[int, str]:
        """Numeric shot counts must be positive."""
        if isinstance(v, int) and v < 1:
            raise ValueError("shots must be >= 1 or 'exact'")
        return v

    @field_validator('times')
    @classmethod
    def validate_times(cls, v: Union[List[float], AutoTimesSpec]) -> Union[List[float], AutoTimesSpec]:
        """Explicit time lists must be non-empty and finite."""
        if isinstance(v, list):
            if not v:
                raise ValueError("times cannot be empty")
            if not all(math.isfinite(t) for t in v):
                raise ValueError("times must be finite")
        return v

    @model_validator(mode='after')
    def validate_dimensions(self) -> 'ExperimentConfig':
        """Every vector and matrix must match the declared dimension."""
        d = self.dimension
        if isinstance(self.hamiltonian, str):
            diagonal = parse_diag_preset(self.hamiltonian)
            if diagonal is None and d != 2:
                raise ValueError(f"Preset '{self.hamiltonian}' requires dimension 2, got {d}")
            if diagonal is not None and len(diagonal) != d:
                raise ValueError(f"diag preset has {len(diagonal)} entries, dimension is {d}")
        else:
            if len(self.hamiltonian) != d or any(len(row) != d for row in self.hamiltonian):
                raise ValueError(f"hamiltonian must be a {d}x{d} matrix")

        labels = [p.label for p in self.projectors]
        if len(set(labels)) != len(labels):
            raise ValueError("projector labels must be unique")
        for projector in self.projectors:
            if len(projector.components) != d:
                raise ValueError(f"projector '{projector.label}' has {len(projector.components)} components, dimension is {d}")

        if self.truth is not None:
            if self.truth.components is not None and len(self.truth.components) != d:
                raise ValueError(f"truth has {len(self.truth.components)} components, dimension is {d}")
            if self.truth.bloch is not None and d != 2:
                raise ValueError("bloch truth requires dimension 2")
        return self


class Versions(BaseModel):
    """Schema and artifact versions embedded in every report."""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(..., alias="schema", description="Report schema semver")
    artifact: str = Field(..., description="Toolkit semver")


class RunReport(BaseModel):
    """Machine-readable result of one CLI command."""
    model_config = ConfigDict(populate_by_name=True)

    command: str = Field(..., description="analyze | simulate | reconstruct | validate-model")
    config_echo: Dict[str, Any] = Field(..., description="The validated configuration")
    results: Dict[str, Any] = Field(default_factory=dict, description="Command payload")
    versions: Versions = Field(..., description="Schema and toolkit versions")

    def to_json(self) -> str:
        """Serialize as indented JSON with a trailing newline."""
        return json.dumps(self.model_dump(mode="json", by_alias=True), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> 'RunReport':
        """Parse a report produced by to_json."""
        return cls.model_validate_json(text)


# Export all models
__all__ = [
    'ComplexPair',
    'NAMED_PRESETS',
    'parse_diag_preset',
    'ProjectorSpec',
    'AutoTimes',
    'AutoTimesSpec',
    'BlochSpec',
    'TruthSpec',
    'ValidationGrid',
    'ExperimentConfig',
    'Versions',
    'RunReport'
]
