"""
Pydantic models for the tomography engine: Λ matrices, recovered intensities
and the final reconstruction report.
"""

from enum import Enum
from typing import Dict, List, Optional
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.state_models import StateVector
from src.models.frame_models import SpanningVerdict, InjectivityVerdict


class LambdaMatrix(BaseModel):
    """The p x μ matrix [|α_k(t_j)|²] linking measured values to intensities."""
    model_config = ConfigDict(frozen=True)

    entries: List[List[float]] = Field(..., min_length=1, description="Row j holds |α_k(t_j)|², k = 0..μ-1")
    times: List[float] = Field(..., min_length=1, description="Time instants t_1..t_p")

    @model_validator(mode='after')
    def validate_shape(self) -> 'LambdaMatrix':
        """One non-negative row per time instant, all rows of equal length."""
        if len(self.entries) != len(self.times):
            raise ValueError("Lambda must have one row per time instant")
        width = len(self.entries[0])
        if width == 0 or any(len(row) != width for row in self.entries):
            raise ValueError("Lambda rows must be non-empty and of equal length")
        if any(value < 0 for row in self.entries for value in row):
            raise ValueError("Lambda entries are squared moduli and cannot be negative")
        return self

    @property
    def p(self) -> int:
        """Number of time instants."""
        return len(self.times)

    @property
    def mu(self) -> int:
        """Number of expansion coefficients."""
        return len(self.entries[0])


class IntensityVector(BaseModel):
    """Per projector, the μ intensities |<φ_i^(k)|ψ(0)>|²."""
    model_config = ConfigDict(frozen=True)

    values: Dict[str, List[float]] = Field(..., description="Projector label -> intensities for k = 0..μ-1")

    @field_validator('values')
    @classmethod
    def validate_values(cls, v: Dict[str, List[float]]) -> Dict[str, List[float]]:
        """Intensities must be non-negative up to inversion round-off."""
        if not v:
            raise ValueError("IntensityVector needs at least one projector")
        for label, row in v.items():
            if not row:
                raise ValueError(f"No intensities for projector {label}")
            if min(row) < -1e-10:
                raise ValueError(f"Negative intensity for projector {label}: {min(row):.3e}")
        return v


class ReconstructionMethod(str, Enum):
    """Algorithm that produced the recovered state."""
    QUBIT_CLOSED_FORM = "paper-qubit-closed-form"
    LIFTING = "lifting"
    EXACT_FIT = "exact-fit"


class ReconstructionDiagnostics(BaseModel):
    """Numbers a user needs to judge the reconstruction."""
    model_config = ConfigDict(frozen=True)

    mu: int = Field(..., ge=1, description="Degree of the minimal polynomial")
    times: List[float] = Field(default_factory=list, description="Distinct time instants in the data")
    det_lambda: Optional[float] = Field(None, description="det Λ when Λ is square")
    lambda_condition: Optional[float] = Field(None, description="Condition number of Λ when above the warning level")
    spanning: SpanningVerdict = Field(..., description="Necessary condition verdict")
    injectivity: InjectivityVerdict = Field(..., description="Rank-2 witness test verdict")
    residual: float = Field(..., ge=0.0, description="Residual norm of the final fit")
    model_discrepancy_max: float = Field(..., ge=0.0, description="max |exact - factored| over the data grid")


class ReconstructionReport(BaseModel):
    """Recovered initial state with its diagnostics."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    recovered_state: StateVector = Field(..., description="Reconstruction, canonical global phase")
    fidelity_to_truth: Optional[float] = Field(None, ge=0.0, le=1.0 + 1e-12, description="|<truth|recovered>|²")
    method: ReconstructionMethod = Field(..., description="Algorithm used")
    diagnostics: ReconstructionDiagnostics = Field(..., description="Diagnostics")


__all__ = [
    'LambdaMatrix',
    'IntensityVector',
    'ReconstructionMethod',
    'ReconstructionDiagnostics',
    'ReconstructionReport'
]
