"""
Pydantic models for simulated or recorded projective measurement data.
"""

from typing import Literal, Union
from pydantic import BaseModel, ConfigDict, Field, field_validator


class MeasurementRecord(BaseModel):
    """One measured value m_i(t_j) of projector i at time t_j."""
    model_config = ConfigDict(frozen=True)

    projector_label: str = Field(..., min_length=1, description="Label of the measured projector")
    time: float = Field(..., description="Time instant (inverse energy units, hbar = 1)")
    value: float = Field(..., ge=0.0, le=1.0, description="Probability or relative frequency")
    shots: Union[int, Literal["exact"]] = Field(
        default="exact",
        description="'exact' for a probability, otherwise the number of repetitions"
    )
    model: Literal["exact", "factored"] = Field(
        default="exact",
        description="Forward model that produced the value"
    )

    @field_validator('shots')
    @classmethod
    def validate_shots(cls, v: Union[int, str]) -> Union[int, str]:
        """Numeric shot counts must be positive."""
        if isinstance(v, int) and v < 1:
            raise ValueError("shots must be >= 1 or 'exact'")
        return v

    @property
    def is_exact(self) -> bool:
        """Whether the value is a probability rather than a frequency."""
        return self.shots == "exact"


__all__ = ['MeasurementRecord']
