"""
Pydantic models for states, operators, projectors and Bloch angles.
Complex arrays are stored as read-only numpy arrays and serialized
as nested [re, im] pairs.
"""

import math
from typing import Annotated, Any, List
import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    computed_field,
    field_validator,
    model_validator
)

from src.settings import get_settings


def _to_complex_array(value: Any, ndim: int) -> np.ndarray:
    """
    Coerce numbers, [re, im] pairs or arrays into a read-only complex array.

    Args:
        value: Nested list or array
        ndim: Expected number of dimensions of the complex array

    Returns:
        Read-only complex128 array
    """
    arr = np.asarray(value)
    if arr.dtype.kind in "iuf" and arr.ndim == ndim + 1 and arr.shape[-1] == 2:
        arr = arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim != ndim:
        raise ValueError(f"Expected a {ndim}-dimensional complex array, got shape {arr.shape}")
    arr = np.array(arr, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise ValueError("Complex array contains non-finite entries")
    arr.setflags(write=False)
    return arr


def complex_to_pairs(arr: np.ndarray) -> List:
    """Serialize a complex array as nested [re, im] pairs."""
    stacked = np.stack([np.real(arr), np.imag(arr)], axis=-1)
    return stacked.tolist()


ComplexVector = Annotated[
    np.ndarray,
    BeforeValidator(lambda v: _to_complex_array(v, 1)),
    PlainSerializer(complex_to_pairs, return_type=list)
]

ComplexMatrix = Annotated[
    np.ndarray,
    BeforeValidator(lambda v: _to_complex_array(v, 2)),
    PlainSerializer(complex_to_pairs, return_type=list)
]


class StateVector(BaseModel):
    """Unit-norm complex vector describing a pure state of a d-level system."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    components: ComplexVector = Field(..., description="Amplitudes in the computational basis")

    @computed_field
    @property
    def dim(self) -> int:
        """Hilbert space dimension d."""
        return int(self.components.shape[0])

    @model_validator(mode='after')
    def validate_state(self) -> 'StateVector':
        """Ensure d >= 2 and unit norm."""
        if self.components.shape[0] < 2:
            raise ValueError("A state vector needs dimension d >= 2")
        norm_sq = float(np.vdot(self.components, self.components).real)
        if abs(norm_sq - 1.0) > get_settings().norm_tolerance:
            raise ValueError(f"State vector must have unit norm, got squared norm {norm_sq:.3e}")
        return self


class HermitianOperator(BaseModel):
    """Self-adjoint d x d matrix: a Hamiltonian or a test matrix Q."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: ComplexMatrix = Field(..., description="Matrix entries (energy units, hbar = 1)")

    @computed_field
    @property
    def dim(self) -> int:
        """Matrix dimension d."""
        return int(self.entries.shape[0])

    @model_validator(mode='after')
    def validate_hermitian(self) -> 'HermitianOperator':
        """Ensure the matrix is square and equal to its conjugate transpose."""
        rows, cols = self.entries.shape
        if rows != cols:
            raise ValueError(f"Operator must be square, got {rows}x{cols}")
        deviation = np.max(np.abs(self.entries - self.entries.conj().T)) if rows else 0.0
        if deviation > get_settings().hermitian_tolerance:
            raise ValueError(f"Operator is not Hermitian (max deviation {deviation:.3e})")
        return self


class UnitaryOperator(BaseModel):
    """Unitary d x d matrix such as the propagator U(t)."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: ComplexMatrix = Field(..., description="Matrix entries")

    @computed_field
    @property
    def dim(self) -> int:
        """Matrix dimension d."""
        return int(self.entries.shape[0])

    @model_validator(mode='after')
    def validate_unitary(self) -> 'UnitaryOperator':
        """Ensure U U^dagger = I."""
        rows, cols = self.entries.shape
        if rows != cols:
            raise ValueError(f"Operator must be square, got {rows}x{cols}")
        deviation = np.max(np.abs(self.entries @ self.entries.conj().T - np.eye(rows)))
        if deviation > get_settings().unitary_tolerance:
            raise ValueError(f"Operator is not unitary (max deviation {deviation:.3e})")
        return self


class Projector(BaseModel):
    """Rank-1 projector |i><i| with a label identifying the measurement."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    direction: StateVector = Field(..., description="The normalized vector |i>")
    label: str = Field(..., min_length=1, description="Identifier of the projective measurement")

    @field_validator('label')
    @classmethod
    def validate_label(cls, v: str) -> str:
        """Ensure the label is not blank."""
        if not v.strip():
            raise ValueError("Projector label cannot be empty")
        return v.strip()

    @property
    def dim(self) -> int:
        """Hilbert space dimension d."""
        return self.direction.dim

    @property
    def matrix(self) -> np.ndarray:
        """The matrix |i><i|."""
        vec = self.direction.components
        return np.outer(vec, vec.conj())


class BlochParameters(BaseModel):
    """Polar and azimuthal angles of a qubit state (cos(θ/2), sin(θ/2) e^{iφ})."""
    model_config = ConfigDict(frozen=True)

    theta: float = Field(..., ge=0.0, le=math.pi, description="Polar angle in radians")
    phi: float = Field(default=0.0, description="Azimuthal angle in radians, stored in [0, 2π)")

    @field_validator('phi')
    @classmethod
    def canonical_phi(cls, v: float) -> float:
        """Map phi into [0, 2π)."""
        if not math.isfinite(v):
            raise ValueError("phi must be finite")
        wrapped = math.fmod(v, 2 * math.pi)
        if wrapped < 0:
            wrapped += 2 * math.pi
        # fmod of values just below 2π can round up to 2π itself
        return 0.0 if wrapped >= 2 * math.pi else wrapped


# Export all models
__all__ = [
    'ComplexVector',
    'ComplexMatrix',
    'complex_to_pairs',
    'StateVector',
    'HermitianOperator',
    'UnitaryOperator',
    'Projector',
    'BlochParameters'
]
