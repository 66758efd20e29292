"""
Krylov frame construction and the spanning (necessary) condition.
"""

from typing import List, Optional, Sequence, Union
import numpy as np

from src.errors import DegenerateInput, DimensionMismatch, DomainError
from src.models.state_models import StateVector, Projector
from src.models.frame_models import Frame, SpanningVerdict
from src.settings import get_settings
from src.utils.spectral_utils import HamiltonianLike, as_hermitian, matrix_powers, minimal_polynomial


def krylov_vectors(
    H: HamiltonianLike,
    i: Union[StateVector, np.ndarray],
    mu: int
) -> List[np.ndarray]:
    """
    Krylov chain |i>, H|i>, ..., H^{μ-1}|i>, unnormalized.

    Args:
        H: Hamiltonian
        i: Projector direction
        mu: Chain length (degree of the minimal polynomial)

    Returns:
        List of μ complex vectors
    """
    if mu < 1:
        raise DomainError(f"mu must be >= 1, got {mu}")
    H = as_hermitian(H)
    vec = i.components if isinstance(i, StateVector) else np.asarray(i, dtype=np.complex128)
    if vec.shape != (H.dim,):
        raise DimensionMismatch(f"Vector of shape {vec.shape} does not match a {H.dim}x{H.dim} Hamiltonian")
    powers = matrix_powers(H, mu)
    return [powers[k] @ vec for k in range(mu)]


def build_frame(H: HamiltonianLike, projectors: Sequence[Projector]) -> Frame:
    """
    Concatenate the Krylov chains of all projectors into one frame.

    Args:
        H: Hamiltonian
        projectors: Measured projectors, in order

    Returns:
        Frame with N = r * μ vectors, projector-major ordering
    """
    if not projectors:
        raise DegenerateInput("A frame needs at least one projector")
    H = as_hermitian(H)
    for projector in projectors:
        if projector.dim != H.dim:
            raise DimensionMismatch(
                f"Projector '{projector.label}' has dimension {projector.dim}, Hamiltonian has {H.dim}"
            )
    mu = minimal_polynomial(H).mu

    rows, index, labels = [], [], []
    for i, projector in enumerate(projectors):
        for k, vec in enumerate(krylov_vectors(H, projector.direction, mu)):
            rows.append(vec)
            index.append((i, k))
            labels.append(projector.label)
    return Frame(vectors=np.array(rows), index=index, projector_labels=labels)


def frame_from_vectors(vectors: Union[Sequence[np.ndarray], np.ndarray], labels: Optional[Sequence[str]] = None) -> Frame:
    """
    Wrap arbitrary vectors as a frame, one pseudo-projector per vector.

    Args:
        vectors: N complex d-vectors
        labels: Optional labels (default v0, v1, ...)

    Returns:
        Frame with index (n, 0) for row n
    """
    rows = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
    if rows.shape[0] == 0:
        raise DegenerateInput("A frame needs at least one vector")
    labels = list(labels) if labels is not None else [f"v{n}" for n in range(rows.shape[0])]
    return Frame(vectors=rows, index=[(n, 0) for n in range(rows.shape[0])], projector_labels=labels)


def check_necessary_condition(frame: Frame, d: Optional[int] = None) -> SpanningVerdict:
    """
    Whether the frame vectors span C^d (the Krylov subspaces sum to the space).

    Args:
        frame: Measurement frame
        d: Hilbert space dimension (default: the frame's)

    Returns:
        SpanningVerdict with the numerical rank
    """
    d = frame.dim if d is None else d
    if d != frame.dim:
        raise DimensionMismatch(f"Frame lives in C^{frame.dim}, not C^{d}")
    singular_values = np.linalg.svd(frame.vectors, compute_uv=False)
    threshold = get_settings().rank_relative_tolerance * singular_values[0]
    rank = int(np.sum(singular_values > threshold))
    return SpanningVerdict(spans=rank == d, rank=rank, defect_dimension=d - rank)


def frame_intensities(frame: Frame, state: Union[StateVector, np.ndarray]) -> np.ndarray:
    """
    The intensity map x -> (|<θ_n|x>|²)_n.

    Args:
        frame: Measurement frame
        state: State (or any vector) of matching dimension

    Returns:
        Length-N array of intensities
    """
    vec = state.components if isinstance(state, StateVector) else np.asarray(state, dtype=np.complex128)
    if vec.shape != (frame.dim,):
        raise DimensionMismatch(f"Vector of shape {vec.shape} does not match frame dimension {frame.dim}")
    return np.abs(frame.vectors.conj() @ vec) ** 2


__all__ = [
    'krylov_vectors',
    'build_frame',
    'frame_from_vectors',
    'check_necessary_condition',
    'frame_intensities'
]
