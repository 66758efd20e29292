"""
Spectral utilities for the Hamiltonian: minimal polynomial, the expansion
exp(-iHt) = Σ_k α_k(t) H^k and the exact propagator.
"""

import math
from functools import lru_cache
from typing import Optional, Tuple, Union
import numpy as np

from src.errors import DomainError, NotHermitian
from src.models.state_models import HermitianOperator, UnitaryOperator
from src.models.spectral_models import MinimalPolynomialInfo, AlphaCoefficients
from src.settings import get_settings

HamiltonianLike = Union[HermitianOperator, np.ndarray]


def as_hermitian(H: HamiltonianLike) -> HermitianOperator:
    """
    Accept a HermitianOperator or a raw matrix.

    Raises:
        NotHermitian: If a raw matrix is not self-adjoint
    """
    if isinstance(H, HermitianOperator):
        return H
    matrix = np.asarray(H, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotHermitian(f"Expected a square matrix, got shape {matrix.shape}")
    deviation = np.max(np.abs(matrix - matrix.conj().T))
    if deviation > get_settings().hermitian_tolerance:
        raise NotHermitian(f"Matrix is not Hermitian (max deviation {deviation:.3e})")
    return HermitianOperator(entries=matrix)


def minimal_polynomial(
    H: HamiltonianLike,
    cluster_tol: Optional[float] = None
) -> MinimalPolynomialInfo:
    """
    Minimal polynomial of a Hermitian matrix from its clustered spectrum.
    Hermitian matrices are diagonalizable, so every root is simple.

    Args:
        H: Hamiltonian
        cluster_tol: Eigenvalues closer than this merge (default 1e-8 * ||H||_2)

    Returns:
        MinimalPolynomialInfo with ascending distinct eigenvalues

    Raises:
        NotHermitian: If H is not self-adjoint
        DomainError: If cluster_tol is not positive
    """
    H = as_hermitian(H)
    eigenvalues = np.linalg.eigvalsh(H.entries)
    if cluster_tol is None:
        spectral_norm = float(np.max(np.abs(eigenvalues)))
        cluster_tol = get_settings().cluster_relative_tolerance * spectral_norm
        cluster_tol = max(cluster_tol, np.finfo(float).tiny)
    elif cluster_tol <= 0:
        raise DomainError(f"cluster_tol must be positive, got {cluster_tol}")

    clusters = [[float(eigenvalues[0])]]
    for value in eigenvalues[1:]:
        if value - clusters[-1][-1] > cluster_tol:
            clusters.append([float(value)])
        else:
            clusters[-1].append(float(value))
    representatives = [float(np.mean(cluster)) for cluster in clusters]

    # np.poly gives descending coefficients of prod (x - l_j); H^mu = -sum a_k H^k
    ascending = np.poly(representatives)[::-1].real
    coefficients = [float(-a) for a in ascending[:-1]]

    return MinimalPolynomialInfo(
        distinct_eigenvalues=representatives,
        mu=len(representatives),
        monic_coefficients=coefficients
    )


def _lagrange_monomials(eigenvalues: Tuple[float, ...]) -> np.ndarray:
    """
    Monomial coefficients of the Lagrange basis polynomials.

    Returns:
        mu x mu array, row j holds the ascending coefficients of L_j
    """
    nodes = np.asarray(eigenvalues, dtype=float)
    basis = np.zeros((nodes.size, nodes.size))
    for j, node in enumerate(nodes):
        others = np.delete(nodes, j)
        if others.size == 0:
            basis[j, 0] = 1.0
            continue
        basis[j] = np.poly(others)[::-1].real / np.prod(node - others)
    return basis


def alpha_at(info: MinimalPolynomialInfo, t: float) -> AlphaCoefficients:
    """
    Expansion coefficients α_k(t) by Lagrange interpolation of e^{-iλt}
    at the distinct eigenvalues.

    Args:
        info: Minimal polynomial of H
        t: Time instant

    Returns:
        AlphaCoefficients with Σ_k α_k λ_j^k = e^{-iλ_j t} for every eigenvalue
    """
    if not math.isfinite(t):
        raise DomainError(f"Time must be finite, got {t}")
    basis = _lagrange_monomials(tuple(info.distinct_eigenvalues))
    samples = np.exp(-1j * np.asarray(info.distinct_eigenvalues) * t)
    values = samples @ basis
    return AlphaCoefficients(values=values, time=float(t))


def alpha_via_ode(
    info: MinimalPolynomialInfo,
    t: float,
    step: Optional[float] = None
) -> AlphaCoefficients:
    """
    Expansion coefficients by integrating dα_k/dt = -i(α_{k-1} + c_k α_{μ-1}),
    α_k(0) = δ_{k0}, with the classical fixed-step RK4 scheme.

    The system is linear, so one RK4 step is the matrix
    I + hA + (hA)²/2 + (hA)³/6 + (hA)⁴/24 and the n steps are its n-th power.

    Args:
        info: Minimal polynomial of H
        t: Target time
        step: Step size (default from settings); shortened so it divides |t|

    Returns:
        AlphaCoefficients at time t

    Raises:
        DomainError: If step is not positive
    """
    step = get_settings().ode_step if step is None else step
    if step <= 0:
        raise DomainError(f"ODE step must be positive, got {step}")
    if not math.isfinite(t):
        raise DomainError(f"Time must be finite, got {t}")

    mu = info.mu
    generator = np.zeros((mu, mu), dtype=np.complex128)
    for k in range(1, mu):
        generator[k, k - 1] = 1.0
    generator[:, mu - 1] += np.asarray(info.monic_coefficients)
    generator *= -1j

    initial = np.zeros(mu, dtype=np.complex128)
    initial[0] = 1.0
    n_steps = int(math.ceil(abs(t) / step))
    if n_steps == 0:
        return AlphaCoefficients(values=initial, time=float(t))

    h = t / n_steps
    hA = h * generator
    rk4_step = np.eye(mu, dtype=np.complex128)
    term = np.eye(mu, dtype=np.complex128)
    for order in range(1, 5):
        term = term @ hA / order
        rk4_step = rk4_step + term
    values = np.linalg.matrix_power(rk4_step, n_steps) @ initial
    return AlphaCoefficients(values=values, time=float(t))


@lru_cache(maxsize=256)
def _cached_powers(key: bytes, dim: int, count: int) -> np.ndarray:
    matrix = np.frombuffer(key, dtype=np.complex128).reshape(dim, dim)
    powers = np.empty((count, dim, dim), dtype=np.complex128)
    powers[0] = np.eye(dim)
    for k in range(1, count):
        powers[k] = powers[k - 1] @ matrix
    powers.setflags(write=False)
    return powers


def matrix_powers(H: HamiltonianLike, count: int) -> np.ndarray:
    """
    Powers H^0..H^{count-1} by repeated multiplication, cached per (H, count).

    Returns:
        Read-only array of shape (count, d, d)
    """
    entries = H.entries if isinstance(H, HermitianOperator) else np.asarray(H, dtype=np.complex128)
    if count < 1:
        raise DomainError(f"Need at least one power, got {count}")
    contiguous = np.ascontiguousarray(entries, dtype=np.complex128)
    return _cached_powers(contiguous.tobytes(), contiguous.shape[0], count)


def propagator(H: HamiltonianLike, t: float) -> UnitaryOperator:
    """
    Exact propagator exp(-iHt) from the eigendecomposition of H.

    Args:
        H: Hamiltonian
        t: Time instant

    Returns:
        UnitaryOperator U(t)
    """
    H = as_hermitian(H)
    if not math.isfinite(t):
        raise DomainError(f"Time must be finite, got {t}")
    eigenvalues, eigenvectors = np.linalg.eigh(H.entries)
    phases = np.exp(-1j * eigenvalues * t)
    return UnitaryOperator(entries=(eigenvectors * phases) @ eigenvectors.conj().T)


def expansion_operator(H: HamiltonianLike, t: float, info: Optional[MinimalPolynomialInfo] = None) -> np.ndarray:
    """Σ_k α_k(t) H^k, the finite expansion of the propagator."""
    H = as_hermitian(H)
    info = info or minimal_polynomial(H)
    alpha = alpha_at(info, t).values
    return np.tensordot(alpha, matrix_powers(H, info.mu), axes=1)


def taylor_propagator(H: HamiltonianLike, t: float, terms: int = 40) -> np.ndarray:
    """Truncated power series Σ_{k<terms} (-it)^k H^k / k!."""
    H = as_hermitian(H)
    result = np.zeros_like(H.entries)
    term = np.eye(H.dim, dtype=np.complex128)
    for k in range(terms):
        result = result + term
        term = term @ H.entries * (-1j * t) / (k + 1)
    return result


__all__ = [
    'HamiltonianLike',
    'as_hermitian',
    'minimal_polynomial',
    'alpha_at',
    'alpha_via_ode',
    'matrix_powers',
    'propagator',
    'expansion_operator',
    'taylor_propagator'
]
