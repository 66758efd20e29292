"""
Measurement simulation: exact projective probabilities, the factored
(cross-term free) data model, and finite-shot sampling.
"""

import logging
import math
from typing import Dict, List, Literal, Sequence, Union
import numpy as np

from src.errors import DimensionMismatch, DomainError
from src.models.state_models import StateVector, Projector
from src.models.measurement_models import MeasurementRecord
from src.settings import get_settings
from src.utils.spectral_utils import HamiltonianLike, alpha_at, as_hermitian, minimal_polynomial, propagator
from src.utils.frame_utils import krylov_vectors

logger = logging.getLogger(__name__)

DataModel = Literal["exact", "factored"]


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """
    Seeded generator built from the project-wide bit generator.

    Args:
        seed: Base seed
        keys: Extra integers mixed into the seed sequence (record indices, ...)

    Returns:
        numpy Generator
    """
    bit_generator = getattr(np.random, get_settings().rng_algorithm)
    return np.random.Generator(bit_generator(np.random.SeedSequence([seed, *keys])))


def _check_dims(H, psi0: StateVector, m: Projector) -> None:
    if not (H.dim == psi0.dim == m.dim):
        raise DimensionMismatch(
            f"Dimensions disagree: H is {H.dim}, state is {psi0.dim}, projector '{m.label}' is {m.dim}"
        )


def measure_exact(H: HamiltonianLike, psi0: StateVector, m: Projector, t: float) -> float:
    """
    Ground-truth probability |<i|U(t)|ψ(0)>|².

    Args:
        H: Hamiltonian
        psi0: Initial state
        m: Projector |i><i|
        t: Time instant

    Returns:
        Probability in [0, 1]
    """
    H = as_hermitian(H)
    _check_dims(H, psi0, m)
    evolved = propagator(H, t).entries @ psi0.components
    value = abs(np.vdot(m.direction.components, evolved)) ** 2
    return float(min(1.0, max(0.0, value)))


def measure_factored(H: HamiltonianLike, psi0: StateVector, m: Projector, t: float) -> float:
    """
    Factored data model Σ_k |α_k(t)|² |<φ^(k)|ψ(0)>|², clamped to [0, 1].

    Args:
        H: Hamiltonian
        psi0: Initial state
        m: Projector |i><i|
        t: Time instant

    Returns:
        Model value in [0, 1]
    """
    H = as_hermitian(H)
    _check_dims(H, psi0, m)
    info = minimal_polynomial(H)
    weights = np.abs(alpha_at(info, t).values) ** 2
    chain = np.array(krylov_vectors(H, m.direction, info.mu))
    intensities = np.abs(chain.conj() @ psi0.components) ** 2
    value = float(weights @ intensities)
    if value < 0.0 or value > 1.0:
        logger.warning(f"Factored model value {value:.6f} for '{m.label}' at t={t} left [0, 1]; clamped")
        value = min(1.0, max(0.0, value))
    return value


def model_discrepancy(H: HamiltonianLike, psi0: StateVector, m: Projector, t: float) -> float:
    """|measure_exact - measure_factored|."""
    return abs(measure_exact(H, psi0, m, t) - measure_factored(H, psi0, m, t))


def add_shot_noise(p: float, shots: int, seed: int) -> float:
    """
    Relative frequency k / shots of a seeded binomial draw.

    Args:
        p: Probability in [0, 1]
        shots: Number of repetitions (>= 1)
        seed: Seed; equal (p, shots, seed) give equal results

    Returns:
        Frequency in [0, 1]
    """
    if not 0.0 <= p <= 1.0 or not math.isfinite(p):
        raise DomainError(f"Probability must lie in [0, 1], got {p}")
    if shots < 1:
        raise DomainError(f"shots must be >= 1, got {shots}")
    k = make_rng(seed).binomial(shots, p)
    return float(k) / shots


def _measure(model: DataModel):
    return measure_exact if model == "exact" else measure_factored


def simulate_records(
    H: HamiltonianLike,
    psi0: StateVector,
    projectors: Sequence[Projector],
    times: Sequence[float],
    model: DataModel = "exact",
    shots: Union[int, Literal["exact"]] = "exact",
    seed: int = 0
) -> List[MeasurementRecord]:
    """
    Records for every projector and time instant, projector-major.
    Record (i, j) with finite shots draws from seed sequence [seed, i, j].

    Args:
        H: Hamiltonian
        psi0: Initial state
        projectors: Measured projectors
        times: Time instants
        model: Forward model, 'exact' or 'factored'
        shots: Shots per record or 'exact'
        seed: Base seed

    Returns:
        List of MeasurementRecord
    """
    H = as_hermitian(H)
    measure = _measure(model)
    records = []
    for i, projector in enumerate(projectors):
        for j, t in enumerate(times):
            value = measure(H, psi0, projector, t)
            if shots != "exact":
                record_seed = int(np.random.SeedSequence([seed, i, j]).generate_state(1)[0])
                value = add_shot_noise(value, shots, record_seed)
            records.append(MeasurementRecord(
                projector_label=projector.label,
                time=float(t),
                value=value,
                shots=shots,
                model=model
            ))
    logger.debug(f"Simulated {len(records)} {model} records (shots={shots})")
    return records


def discrepancy_profile(
    H: HamiltonianLike,
    psi0: StateVector,
    projectors: Sequence[Projector],
    times: Sequence[float]
) -> Dict[str, Dict[str, float]]:
    """
    Model discrepancy over a time grid, summarized per projector.

    Args:
        H: Hamiltonian
        psi0: Initial state
        projectors: Measured projectors
        times: Grid of time instants (non-empty)

    Returns:
        Label -> {"max", "mean", "argmax_time"}
    """
    if len(times) == 0:
        raise DomainError("Discrepancy profile needs at least one time instant")
    H = as_hermitian(H)
    profile = {}
    for projector in projectors:
        values = np.array([model_discrepancy(H, psi0, projector, t) for t in times])
        peak = int(np.argmax(values))
        profile[projector.label] = {
            "max": float(values[peak]),
            "mean": float(np.mean(values)),
            "argmax_time": float(times[peak])
        }
    return profile


def max_discrepancy(
    H: HamiltonianLike,
    psi0: StateVector,
    projectors: Sequence[Projector],
    times: Sequence[float],
    default: float = 0.0
) -> float:
    """Largest model discrepancy over all projectors and times."""
    if len(times) == 0:
        return float(default)
    return max(entry["max"] for entry in discrepancy_profile(H, psi0, projectors, times).values())


__all__ = [
    'make_rng',
    'measure_exact',
    'measure_factored',
    'model_discrepancy',
    'add_shot_noise',
    'simulate_records',
    'discrepancy_profile',
    'max_discrepancy'
]
