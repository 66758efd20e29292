"""
State vector utilities: normalization, global phase, fidelity and the
Bloch parametrization of qubit states.
"""

import math
from typing import Sequence, Tuple, Union
import numpy as np
from pydantic import ValidationError

from src.errors import DegenerateInput, DimensionMismatch, DomainError
from src.models.state_models import StateVector, BlochParameters

# Components below this modulus count as zero when fixing the global phase
PHASE_ZERO_TOLERANCE = 1e-12


def canonical_phase(vector: np.ndarray) -> np.ndarray:
    """
    Rotate a vector so its first nonzero component is real and non-negative.

    Args:
        vector: Complex vector

    Returns:
        Phase-rotated copy of the vector
    """
    vec = np.asarray(vector, dtype=np.complex128)
    scale = np.max(np.abs(vec)) if vec.size else 0.0
    if scale == 0:
        return vec.copy()
    for component in vec:
        if abs(component) > PHASE_ZERO_TOLERANCE * scale:
            return vec * (abs(component) / component)
    return vec.copy()


def make_state(components: Union[Sequence[complex], np.ndarray]) -> StateVector:
    """
    Build a unit-norm state by rescaling the given amplitudes.

    Args:
        components: Complex amplitudes (any non-zero norm)

    Returns:
        Normalized StateVector

    Raises:
        DegenerateInput: If the list is empty, has a single entry, or is zero
    """
    vec = np.asarray(components, dtype=np.complex128).reshape(-1)
    if vec.size == 0:
        raise DegenerateInput("Cannot build a state from an empty component list")
    if vec.size < 2:
        raise DegenerateInput("A state needs at least two components")
    if not np.all(np.isfinite(vec)):
        raise DegenerateInput("State components must be finite")
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise DegenerateInput("Cannot normalize the zero vector")
    return StateVector(components=vec / norm)


def fidelity(a: StateVector, b: StateVector) -> float:
    """
    Global-phase-invariant overlap |<a|b>|².

    Args:
        a: First state
        b: Second state

    Returns:
        Fidelity in [0, 1]
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"Cannot compare states of dimension {a.dim} and {b.dim}")
    overlap = abs(np.vdot(a.components, b.components)) ** 2
    return float(min(1.0, max(0.0, overlap)))


def bloch_to_state(p: Union[BlochParameters, Tuple[float, float]]) -> StateVector:
    """
    Qubit state (cos(θ/2), sin(θ/2) e^{iφ}).

    Args:
        p: Bloch angles, as a model or a (theta, phi) tuple

    Returns:
        StateVector of dimension 2

    Raises:
        DomainError: If θ lies outside [0, π]
    """
    if not isinstance(p, BlochParameters):
        try:
            theta, phi = p
            p = BlochParameters(theta=theta, phi=phi)
        except (ValidationError, TypeError, ValueError) as e:
            raise DomainError(f"Invalid Bloch angles {p!r}: {e}") from None
    if not 0.0 <= p.theta <= math.pi:
        raise DomainError(f"theta must lie in [0, π], got {p.theta}")
    half = p.theta / 2
    return StateVector(components=[math.cos(half), math.sin(half) * np.exp(1j * p.phi)])


def state_to_bloch(s: StateVector) -> BlochParameters:
    """
    Bloch angles of a qubit state, after removing its global phase.
    At the poles the azimuth is undefined and φ = 0 is returned.

    Args:
        s: Qubit state

    Returns:
        BlochParameters

    Raises:
        DimensionMismatch: If the state is not a qubit
    """
    if s.dim != 2:
        raise DimensionMismatch(f"Bloch parameters need d = 2, got d = {s.dim}")
    c0, c1 = canonical_phase(s.components)
    r0, r1 = abs(c0), abs(c1)
    theta = min(math.pi, 2 * math.atan2(r1, r0))
    if r0 < PHASE_ZERO_TOLERANCE or r1 < PHASE_ZERO_TOLERANCE:
        return BlochParameters(theta=theta, phi=0.0)
    return BlochParameters(theta=theta, phi=float(np.angle(c1)))


def random_state(dim: int, rng: np.random.Generator) -> StateVector:
    """
    Haar-random pure state.

    Args:
        dim: Hilbert space dimension
        rng: Seeded generator

    Returns:
        StateVector drawn uniformly from the unit sphere
    """
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return make_state(vec)


__all__ = [
    'canonical_phase',
    'make_state',
    'fidelity',
    'bloch_to_state',
    'state_to_bloch',
    'random_state'
]
