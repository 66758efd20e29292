"""
Runtime configuration for the toolkit.
Values come from environment variables prefixed with STROBO_ (or a .env file),
falling back to the defaults below.
"""

from typing import Optional
from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical tolerances and defaults shared by all modules."""

    model_config = SettingsConfigDict(
        env_prefix="STROBO_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )

    # Type invariants
    norm_tolerance: float = Field(default=1e-10, gt=0, description="Unit-norm tolerance for state vectors")
    hermitian_tolerance: float = Field(default=1e-12, gt=0, description="Entry-wise self-adjointness tolerance")
    unitary_tolerance: float = Field(default=1e-10, gt=0, description="Unitarity tolerance for propagators")

    # Spectral
    cluster_relative_tolerance: float = Field(default=1e-8, gt=0, description="Eigenvalue clustering, relative to ||H||")
    ode_step: float = Field(default=1e-4, gt=0, description="Fixed step of the RK4 integrator for alpha_k(t)")

    # Frames and injectivity
    rank_relative_tolerance: float = Field(default=1e-10, gt=0, description="Numerical rank threshold, relative to sigma_max")
    injectivity_attempts: int = Field(default=64, ge=1, description="Multi-starts for the rank-2 witness search")
    witness_objective_tolerance: float = Field(default=1e-12, gt=0, description="Tail singular value objective for a witness")
    witness_polish_iterations: int = Field(default=20, ge=0, description="Alternating projections when polishing a witness")
    constraint_tolerance: float = Field(default=1e-8, gt=0, description="Max |<theta|Q|theta>| accepted for a witness")

    # Reconstruction
    lambda_det_threshold: float = Field(default=1e-10, gt=0, description="Minimum |det Lambda| for an invertible Lambda")
    lambda_condition_warning: float = Field(default=1e6, gt=0, description="Condition number above which Lambda is reported")
    clamp_tolerance: float = Field(default=1e-6, gt=0, description="Rounding slack for arccos/atan2 inputs")
    refine_iterations: int = Field(default=200, ge=0, description="Gauss-Newton refinement steps after lifting")
    exact_fit_random_starts: int = Field(default=8, ge=0, description="Seeded random starts for exact-fit mode")
    exact_fit_residual_tolerance: float = Field(default=1e-6, gt=0, description="Residual norm accepted for noiseless data")

    # Measurement simulation
    rng_algorithm: str = Field(default="PCG64", description="numpy bit generator used for every random draw")
    validation_points: int = Field(default=101, ge=2, description="Grid points for validate-model scans")

    # Output
    log_level: str = Field(default="INFO", description="Logging level for the CLI")
    schema_version: str = Field(default="1.0.0", description="Report/config schema version")


# Global instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create the global settings instance."""
    global _settings
    if _settings is None:
        load_dotenv()
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None


__all__ = ['Settings', 'get_settings', 'reset_settings']
