"""
Exception hierarchy for the stroboscopic phase retrieval toolkit.
Every error carries the process exit code the CLI returns for it.
"""


class StroboscopicError(ValueError):
    """Base class for all domain errors."""
    exit_code: int = 1


class DegenerateInput(StroboscopicError):
    """Empty or zero input where a non-trivial one is required."""


class DimensionMismatch(StroboscopicError):
    """Objects of incompatible Hilbert space dimension were combined."""


class DomainError(StroboscopicError):
    """A parameter lies outside its admissible range."""


class NotHermitian(StroboscopicError):
    """A matrix expected to be self-adjoint is not."""


class NoInvertibleTimes(StroboscopicError):
    """No choice of time instants on the search grid makes Λ invertible."""
    exit_code = 8


class SingularLambda(StroboscopicError):
    """The Λ matrix is not square or has a vanishing determinant."""
    exit_code = 4


class DataMismatch(StroboscopicError):
    """Measurement data do not match the projectors or time instants."""
    exit_code = 3


class InconsistentData(StroboscopicError):
    """Intensities cannot come from any state of the assumed model."""
    exit_code = 7


class FrameDeficient(StroboscopicError):
    """The measurement frame does not span the Hilbert space."""
    exit_code = 5


class NonConvergence(StroboscopicError):
    """The state fit did not reach the residual threshold."""
    exit_code = 6


class ConfigError(StroboscopicError):
    """The experiment configuration file is malformed."""
    exit_code = 2


__all__ = [
    'StroboscopicError',
    'DegenerateInput',
    'DimensionMismatch',
    'DomainError',
    'NotHermitian',
    'NoInvertibleTimes',
    'SingularLambda',
    'DataMismatch',
    'InconsistentData',
    'FrameDeficient',
    'NonConvergence',
    'ConfigError'
]
