"""
Injectivity test for intensity measurements defined by a frame: does the
space of Hermitian matrices Q with <θ_n|Q|θ_n> = 0 for every frame vector
contain a nonzero element of rank at most two?
"""

import logging
import math
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple
import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize

from src.errors import DimensionMismatch, DomainError
from src.models.state_models import HermitianOperator
from src.models.frame_models import (
    Frame,
    HermitianBasisCoordinates,
    InjectivityStatus,
    InjectivityVerdict
)
from src.settings import get_settings

logger = logging.getLogger(__name__)


@lru_cache(maxsize=16)
def _basis_stack(d: int) -> np.ndarray:
    """Canonical orthonormal real basis of d x d Hermitian matrices, shape (d², d, d)."""
    stack = []
    for j in range(d):
        element = np.zeros((d, d), dtype=np.complex128)
        element[j, j] = 1.0
        stack.append(element)
    root = 1 / math.sqrt(2)
    for j in range(d):
        for k in range(j + 1, d):
            symmetric = np.zeros((d, d), dtype=np.complex128)
            symmetric[j, k] = symmetric[k, j] = root
            antisymmetric = np.zeros((d, d), dtype=np.complex128)
            antisymmetric[j, k] = 1j * root
            antisymmetric[k, j] = -1j * root
            stack.extend([symmetric, antisymmetric])
    basis = np.array(stack)
    basis.setflags(write=False)
    return basis


def _hermitian_part(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.conj().T) / 2


def hermitian_basis(d: int) -> List[HermitianOperator]:
    """
    Basis {E_jj; (E_jk + E_kj)/√2; i(E_jk - E_kj)/√2, j < k}, orthonormal
    for the real inner product tr(AB).

    Args:
        d: Matrix dimension

    Returns:
        d² Hermitian matrices: diagonal units first, then one symmetric and
        one antisymmetric element per pair j < k
    """
    if d < 1:
        raise DomainError(f"Dimension must be positive, got {d}")
    return [HermitianOperator(entries=element) for element in _basis_stack(d)]


def hermitian_to_coords(Q: HermitianOperator) -> HermitianBasisCoordinates:
    """Real coordinates tr(B_b Q) in the canonical basis."""
    basis = _basis_stack(Q.dim)
    coords = np.einsum('bij,ji->b', basis, Q.entries).real
    return HermitianBasisCoordinates(coords=coords.tolist())


def coords_to_hermitian(coords: HermitianBasisCoordinates) -> HermitianOperator:
    """Inverse of hermitian_to_coords."""
    matrix = np.tensordot(np.asarray(coords.coords), _basis_stack(coords.dim), axes=1)
    return HermitianOperator(entries=_hermitian_part(matrix))


def _deduplicate(vectors: np.ndarray) -> np.ndarray:
    """Drop rows equal to an earlier row up to a global phase."""
    kept: List[np.ndarray] = []
    for vec in vectors:
        norm = np.linalg.norm(vec)
        duplicate = any(
            abs(np.linalg.norm(other) - norm) <= 1e-12 * norm
            and abs(abs(np.vdot(other, vec)) - norm * norm) <= 1e-12 * norm * norm
            for other in kept
        )
        if not duplicate:
            kept.append(vec)
    if len(kept) < len(vectors):
        logger.warning(
            f"Frame contains {len(vectors) - len(kept)} duplicate vector(s) up to phase; "
            f"using {len(kept)} distinct constraints"
        )
    return np.array(kept)


def measurement_rows(vectors: np.ndarray) -> np.ndarray:
    """Row n holds <θ_n|B_b|θ_n> for every basis element B_b, one row per vector."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
    basis = _basis_stack(vectors.shape[1])
    return np.einsum('ni,bij,nj->nb', vectors.conj(), basis, vectors).real


def constraint_matrix(frame: Frame) -> np.ndarray:
    """
    Real linear functionals Q -> <θ_n|Q|θ_n> in Hermitian basis coordinates.
    Frame vectors equal up to phase contribute a single row.

    Args:
        frame: Measurement frame

    Returns:
        Real array of shape (N', d²) with N' <= N distinct rows
    """
    return measurement_rows(_deduplicate(frame.vectors))


def _nullspace_coords(frame: Frame, constraints: Optional[np.ndarray] = None) -> np.ndarray:
    if constraints is None:
        constraints = constraint_matrix(frame)
    return null_space(constraints, rcond=get_settings().rank_relative_tolerance).T


def hermitian_nullspace(frame: Frame, constraints: Optional[np.ndarray] = None) -> List[HermitianOperator]:
    """
    Orthonormal basis (in coordinate space) of the Hermitian constraint kernel.

    Args:
        frame: Measurement frame
        constraints: Precomputed constraint_matrix(frame)

    Returns:
        Kernel basis as Hermitian matrices, empty when the kernel is trivial
    """
    basis = _basis_stack(frame.dim)
    return [
        HermitianOperator(entries=_hermitian_part(np.tensordot(row, basis, axes=1)))
        for row in _nullspace_coords(frame, constraints)
    ]


def _sign_normalized(matrix: np.ndarray) -> np.ndarray:
    """Scale to unit Frobenius norm with the largest coordinate positive."""
    coords = np.einsum('bij,ji->b', _basis_stack(matrix.shape[0]), matrix).real
    pivot = coords[np.argmax(np.abs(coords))]
    return matrix * (np.sign(pivot) / np.linalg.norm(matrix))


def _tail_energy(matrix: np.ndarray) -> float:
    """Σ_{j>=3} σ_j² for a Hermitian matrix (its singular values are |eigenvalues|)."""
    magnitudes = np.sort(np.abs(np.linalg.eigvalsh(matrix)))[::-1]
    return float(np.sum(magnitudes[2:] ** 2))


def _truncate_rank2(matrix: np.ndarray) -> np.ndarray:
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    keep = np.argsort(np.abs(eigenvalues))[::-1][:2]
    return _hermitian_part((eigenvectors[:, keep] * eigenvalues[keep]) @ eigenvectors[:, keep].conj().T)


def _polish(
    matrix: np.ndarray,
    projector: np.ndarray,
    basis: np.ndarray,
    iterations: int,
    tolerance: float
) -> Tuple[np.ndarray, float]:
    """
    Alternate between rank-2 truncation and projection onto the kernel.

    Returns:
        (rank <= 2 candidate with unit norm, its distance to the kernel)
    """
    candidate = _truncate_rank2(matrix)
    distance = math.inf
    for _ in range(iterations + 1):
        candidate = candidate / np.linalg.norm(candidate)
        coords = np.einsum('bij,ji->b', basis, candidate).real
        distance = float(np.linalg.norm(coords - projector @ coords))
        if distance < tolerance:
            break
        candidate = _truncate_rank2(np.tensordot(projector @ coords, basis, axes=1))
    return candidate, distance


def find_low_rank_witness(
    nullspace_basis: Sequence[HermitianOperator],
    attempts: Optional[int] = None,
    seed: int = 0,
    constraints: Optional[np.ndarray] = None
) -> InjectivityVerdict:
    """
    Search the kernel for a nonzero Hermitian matrix of rank <= 2.

    For d = 2 any nonzero kernel element qualifies. For d > 2 the tail
    energy Σ_{j>=3} σ_j(Q(c))² is minimized over unit coefficient vectors c
    from seeded random starts; each start draws from default_rng([seed, attempt]).

    Args:
        nullspace_basis: Orthonormal kernel basis
        attempts: Number of multi-starts (default from settings)
        seed: Base seed
        constraints: Optional constraint matrix used to re-verify a witness

    Returns:
        InjectivityVerdict (Injective for an empty basis)
    """
    settings = get_settings()
    attempts = settings.injectivity_attempts if attempts is None else attempts
    if attempts < 1:
        raise DomainError(f"attempts must be >= 1, got {attempts}")

    size = len(nullspace_basis)
    if size == 0:
        return InjectivityVerdict(status=InjectivityStatus.INJECTIVE, nullspace_dimension=0)

    d = nullspace_basis[0].dim
    if any(Q.dim != d for Q in nullspace_basis):
        raise DimensionMismatch("Kernel basis elements have different dimensions")
    if d == 2:
        witness = _sign_normalized(nullspace_basis[0].entries)
        return InjectivityVerdict(
            status=InjectivityStatus.NON_INJECTIVE,
            nullspace_dimension=size,
            witness=HermitianOperator(entries=_hermitian_part(witness))
        )

    basis = _basis_stack(d)
    stack = np.array([Q.entries for Q in nullspace_basis])
    kernel_coords = np.einsum('kij,bji->kb', stack, basis).real
    projector = kernel_coords.T @ np.linalg.pinv(kernel_coords.T)

    def combine(c: np.ndarray) -> np.ndarray:
        return np.tensordot(c / np.linalg.norm(c), stack, axes=1)

    def objective(c: np.ndarray) -> float:
        return _tail_energy(combine(c))

    for attempt in range(attempts):
        rng = np.random.default_rng([seed, attempt])
        start = rng.standard_normal(size)
        result = minimize(objective, start, method="BFGS", options={"gtol": 1e-12, "maxiter": 500})
        # near-witnesses are handed to the polish step, which accepts or rejects them
        if result.fun > math.sqrt(settings.witness_objective_tolerance):
            continue
        candidate, distance = _polish(
            combine(result.x),
            projector,
            basis,
            settings.witness_polish_iterations,
            settings.constraint_tolerance
        )
        if distance >= settings.constraint_tolerance:
            continue
        candidate = _hermitian_part(_sign_normalized(candidate))
        if constraints is not None:
            coords = np.einsum('bij,ji->b', basis, candidate).real
            if np.max(np.abs(constraints @ coords)) >= settings.constraint_tolerance:
                continue
        logger.debug(f"Rank-2 witness found at attempt {attempt} (objective {result.fun:.3e})")
        return InjectivityVerdict(
            status=InjectivityStatus.NON_INJECTIVE,
            nullspace_dimension=size,
            witness=HermitianOperator(entries=candidate)
        )

    logger.info(f"No rank-2 witness found in {attempts} attempts (kernel dimension {size})")
    return InjectivityVerdict(status=InjectivityStatus.UNDETERMINED, nullspace_dimension=size)


def verify_witness(frame: Frame, witness: HermitianOperator) -> bool:
    """
    Independent certificate check: nonzero, rank <= 2 and annihilated by
    every frame constraint.
    """
    if witness.dim != frame.dim:
        raise DimensionMismatch(f"Witness dimension {witness.dim} does not match frame dimension {frame.dim}")
    singular_values = np.linalg.svd(witness.entries, compute_uv=False)
    if singular_values[0] == 0:
        return False
    if singular_values.size > 2 and singular_values[2] >= 1e-10 * singular_values[0]:
        return False
    values = np.einsum('ni,ij,nj->n', frame.vectors.conj(), witness.entries, frame.vectors)
    return bool(np.max(np.abs(values)) < get_settings().constraint_tolerance)


def check_injectivity(
    frame: Frame,
    attempts: Optional[int] = None,
    seed: int = 0
) -> InjectivityVerdict:
    """
    Full injectivity test: constraints, kernel, witness search.

    Args:
        frame: Measurement frame
        attempts: Witness search starts (default from settings)
        seed: Base seed of the witness search

    Returns:
        InjectivityVerdict with advisory_4d4 = (N >= 4d - 4)
    """
    d = frame.dim
    constraints = constraint_matrix(frame)
    nullspace = hermitian_nullspace(frame, constraints)
    verdict = find_low_rank_witness(nullspace, attempts=attempts, seed=seed, constraints=constraints)

    if verdict.status == InjectivityStatus.NON_INJECTIVE and not verify_witness(frame, verdict.witness):
        logger.warning("Witness failed re-verification against the frame; verdict downgraded to Undetermined")
        verdict = InjectivityVerdict(status=InjectivityStatus.UNDETERMINED, nullspace_dimension=verdict.nullspace_dimension)

    return verdict.model_copy(update={"advisory_4d4": frame.size >= 4 * d - 4})


def ambiguous_pair(witness: HermitianOperator) -> Tuple[np.ndarray, np.ndarray]:
    """
    Two vectors x, y with x x† - y y† equal to the rank <= 2 witness, so their
    intensities agree on every frame vector annihilating the witness.

    x = √λ₊ v₊ and y = √|λ₋| v₋ from the extreme eigenpairs. For a traceless
    witness both have the same norm and are rescaled to unit vectors.

    Args:
        witness: Nonzero Hermitian matrix of rank <= 2

    Returns:
        (x, y); one of them is zero when the witness is semidefinite
    """
    eigenvalues, eigenvectors = np.linalg.eigh(witness.entries)
    scale = np.max(np.abs(eigenvalues))
    if scale == 0:
        raise DomainError("Witness must be nonzero")
    rest = np.sort(np.abs(eigenvalues))[::-1][2:]
    if rest.size and rest[0] >= 1e-10 * scale:
        raise DomainError("Witness must have rank <= 2")

    top, bottom = eigenvalues[-1], eigenvalues[0]
    x = math.sqrt(max(top, 0.0)) * eigenvectors[:, -1]
    y = math.sqrt(max(-bottom, 0.0)) * eigenvectors[:, 0]
    if top > 0 > bottom and abs(top + bottom) <= 1e-10 * scale:
        x, y = x / math.sqrt(top), y / math.sqrt(-bottom)
    return x, y


__all__ = [
    'hermitian_basis',
    'hermitian_to_coords',
    'coords_to_hermitian',
    'measurement_rows',
    'constraint_matrix',
    'hermitian_nullspace',
    'find_low_rank_witness',
    'verify_witness',
    'check_injectivity',
    'ambiguous_pair'
]
