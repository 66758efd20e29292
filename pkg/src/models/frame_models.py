"""
Pydantic models for Krylov measurement frames and their certification verdicts.
"""

from enum import Enum
from typing import List, Optional, Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from src.models.state_models import ComplexMatrix, HermitianOperator


class Frame(BaseModel):
    """Ordered family of measurement vectors φ_i^(k) = H^k|i>, stored as rows."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vectors: ComplexMatrix = Field(..., description="N x d array, one frame vector per row")
    index: List[Tuple[int, int]] = Field(..., description="(projector i, power k) of each row")
    projector_labels: List[str] = Field(..., description="Label of the projector each row derives from")

    @computed_field
    @property
    def size(self) -> int:
        """Number of frame vectors N."""
        return int(self.vectors.shape[0])

    @computed_field
    @property
    def dim(self) -> int:
        """Hilbert space dimension d."""
        return int(self.vectors.shape[1])

    @model_validator(mode='after')
    def validate_frame(self) -> 'Frame':
        """Ensure provenance is complete and no vector vanishes."""
        if self.vectors.shape[0] == 0:
            raise ValueError("A frame needs at least one vector")
        if len(self.index) != self.size or len(self.projector_labels) != self.size:
            raise ValueError("index and projector_labels must have one entry per vector")
        if np.any(np.linalg.norm(self.vectors, axis=1) == 0):
            raise ValueError("Frame vectors must be nonzero")
        return self

    def flat_index(self, i: int, k: int) -> int:
        """Row of the vector H^k|i>."""
        try:
            return self.index.index((i, k))
        except ValueError:
            raise KeyError(f"Frame has no vector for projector {i}, power {k}") from None


class SpanningVerdict(BaseModel):
    """Outcome of the necessary (spanning) condition check."""
    model_config = ConfigDict(frozen=True)

    spans: bool = Field(..., description="Whether the frame spans the Hilbert space")
    rank: int = Field(..., ge=0, description="Numerical rank of the frame")
    defect_dimension: int = Field(..., ge=0, description="d - rank")


class HermitianBasisCoordinates(BaseModel):
    """Real coordinates of a Hermitian matrix in the canonical orthonormal basis."""
    model_config = ConfigDict(frozen=True)

    coords: List[float] = Field(..., min_length=1, description="d^2 real coordinates")

    @computed_field
    @property
    def dim(self) -> int:
        """Matrix dimension d."""
        return int(round(len(self.coords) ** 0.5))

    @model_validator(mode='after')
    def validate_length(self) -> 'HermitianBasisCoordinates':
        """Ensure the coordinate count is a perfect square."""
        if self.dim * self.dim != len(self.coords):
            raise ValueError("Coordinate count must be d^2")
        return self


class InjectivityStatus(str, Enum):
    """Three-valued injectivity verdict."""
    INJECTIVE = "Injective"
    NON_INJECTIVE = "NonInjective"
    UNDETERMINED = "Undetermined"


class InjectivityVerdict(BaseModel):
    """Outcome of the rank-2 Hermitian witness test on the frame's constraint space."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    status: InjectivityStatus = Field(..., description="Injective, NonInjective or Undetermined")
    nullspace_dimension: int = Field(..., ge=0, description="Dimension of the Hermitian constraint kernel")
    witness: Optional[HermitianOperator] = Field(None, description="Nonzero rank <= 2 kernel element")
    advisory_4d4: bool = Field(default=False, description="Whether N >= 4d - 4")

    @model_validator(mode='after')
    def validate_witness(self) -> 'InjectivityVerdict':
        """A NonInjective verdict must ship its witness."""
        if self.status == InjectivityStatus.NON_INJECTIVE and self.witness is None:
            raise ValueError("NonInjective verdict requires a witness")
        if self.status == InjectivityStatus.INJECTIVE and self.witness is not None:
            raise ValueError("Injective verdict cannot carry a witness")
        return self


__all__ = [
    'Frame',
    'SpanningVerdict',
    'HermitianBasisCoordinates',
    'InjectivityStatus',
    'InjectivityVerdict'
]
