"""
Pydantic models for spectral data of the Hamiltonian.
"""

from typing import List
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.state_models import ComplexVector


class MinimalPolynomialInfo(BaseModel):
    """Distinct eigenvalues of H and the coefficients of its minimal polynomial."""
    model_config = ConfigDict(frozen=True)

    distinct_eigenvalues: List[float] = Field(..., min_length=1, description="Cluster representatives, ascending")
    mu: int = Field(..., ge=1, description="Degree of the minimal polynomial")
    monic_coefficients: List[float] = Field(
        ...,
        min_length=1,
        description="c_0..c_{mu-1} such that H^mu = sum_k c_k H^k"
    )

    @model_validator(mode='after')
    def validate_degree(self) -> 'MinimalPolynomialInfo':
        """Ensure mu matches the eigenvalue and coefficient counts."""
        if len(self.distinct_eigenvalues) != self.mu:
            raise ValueError("mu must equal the number of distinct eigenvalues")
        if len(self.monic_coefficients) != self.mu:
            raise ValueError("mu must equal the number of monic coefficients")
        if any(b <= a for a, b in zip(self.distinct_eigenvalues, self.distinct_eigenvalues[1:])):
            raise ValueError("distinct_eigenvalues must be strictly ascending")
        # the roots must reproduce the coefficients: prod (x - l_j) = x^mu - sum c_k x^k
        expanded = np.poly(self.distinct_eigenvalues)[::-1].real
        scale = max(1.0, float(np.max(np.abs(expanded))))
        if np.max(np.abs(expanded[:-1] + np.asarray(self.monic_coefficients))) > 1e-8 * scale:
            raise ValueError("monic_coefficients do not match distinct_eigenvalues")
        return self


class AlphaCoefficients(BaseModel):
    """Values α_0(t)..α_{μ-1}(t) with exp(-iHt) = Σ α_k(t) H^k."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: ComplexVector = Field(..., description="Expansion coefficients at time t")
    time: float = Field(..., description="Time instant (inverse energy units)")


__all__ = ['MinimalPolynomialInfo', 'AlphaCoefficients']
