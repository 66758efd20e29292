"""
Tests for the minimal polynomial, the α_k(t) expansion and the propagator.
"""

import math
import os
import sys

import numpy as np
import pytest
from pydantic import ValidationError

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from conftest import random_hermitian
from src.errors import DomainError, NotHermitian
from src.models.spectral_models import MinimalPolynomialInfo
from src.utils.spectral_utils import (
    alpha_at,
    alpha_via_ode,
    as_hermitian,
    expansion_operator,
    matrix_powers,
    minimal_polynomial,
    propagator,
    taylor_propagator
)


# ============================================================================
# Minimal polynomial
# ============================================================================

def test_minimal_polynomial_sigma_y(sigma_y):
    info = minimal_polynomial(sigma_y)
    assert info.mu == 2
    assert info.distinct_eigenvalues == pytest.approx([-1.0, 1.0])
    # σ_y² = I
    assert info.monic_coefficients == pytest.approx([1.0, 0.0], abs=1e-12)


def test_minimal_polynomial_identity_has_degree_one():
    info = minimal_polynomial(np.eye(3))
    assert info.mu == 1
    assert info.distinct_eigenvalues == pytest.approx([1.0])
    assert info.monic_coefficients == pytest.approx([1.0])


def test_minimal_polynomial_merges_degenerate_eigenvalues():
    info = minimal_polynomial(np.diag([1.0, 1.0, 2.0]))
    assert info.mu == 2
    assert info.distinct_eigenvalues == pytest.approx([1.0, 2.0])


def test_minimal_polynomial_zero_matrix():
    info = minimal_polynomial(np.zeros((2, 2)))
    assert info.mu == 1
    assert info.distinct_eigenvalues == pytest.approx([0.0])


def test_minimal_polynomial_annihilates_h(rng):
    H = random_hermitian(rng, 4)
    info = minimal_polynomial(H)
    powers = matrix_powers(H, info.mu + 1)
    residual = powers[info.mu] - np.tensordot(np.asarray(info.monic_coefficients), powers[:info.mu], axes=1)
    assert np.max(np.abs(residual)) < 1e-9


def test_minimal_polynomial_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        minimal_polynomial(np.array([[0, 1], [0, 0]]))


def test_minimal_polynomial_rejects_bad_cluster_tol(sigma_y):
    with pytest.raises(DomainError):
        minimal_polynomial(sigma_y, cluster_tol=0.0)


def test_minimal_polynomial_info_checks_consistency():
    with pytest.raises(ValidationError):
        MinimalPolynomialInfo(distinct_eigenvalues=[-1.0, 1.0], mu=2, monic_coefficients=[2.0, 0.0])


def test_as_hermitian_rejects_non_square():
    with pytest.raises(NotHermitian):
        as_hermitian(np.zeros((2, 3)))


# ============================================================================
# α_k(t)
# ============================================================================

def test_alpha_sigma_y_closed_form(sigma_y):
    info = minimal_polynomial(sigma_y)
    for t in np.linspace(0.0, 2 * math.pi, 17):
        values = alpha_at(info, t).values
        assert values[0] == pytest.approx(math.cos(t), abs=1e-12)
        assert values[1] == pytest.approx(-1j * math.sin(t), abs=1e-12)


def test_alpha_at_zero_is_unit_vector(rng):
    info = minimal_polynomial(random_hermitian(rng, 4))
    values = alpha_at(info, 0.0).values
    expected = np.zeros(info.mu)
    expected[0] = 1.0
    assert np.allclose(values, expected, atol=1e-10)


def test_alpha_rejects_non_finite_time(sigma_y):
    with pytest.raises(DomainError):
        alpha_at(minimal_polynomial(sigma_y), float("inf"))


@pytest.mark.parametrize("seed", range(6))
def test_alpha_ode_matches_lagrange(seed):
    rng = np.random.default_rng(seed)
    d = 2 + seed % 3
    info = minimal_polynomial(random_hermitian(rng, d) / 2)
    for t in rng.uniform(0.0, 10.0, size=3):
        algebraic = alpha_at(info, t).values
        integrated = alpha_via_ode(info, t).values
        scale = max(1.0, float(np.max(np.abs(algebraic))))
        assert np.max(np.abs(integrated - algebraic)) < 1e-7 * scale


def test_alpha_ode_negative_time_and_bad_step(sigma_y):
    info = minimal_polynomial(sigma_y)
    values = alpha_via_ode(info, -1.0).values
    assert values[0] == pytest.approx(math.cos(1.0), abs=1e-9)
    assert values[1] == pytest.approx(1j * math.sin(1.0), abs=1e-9)
    with pytest.raises(DomainError):
        alpha_via_ode(info, 1.0, step=0.0)


def test_equally_spaced_times_give_invertible_alpha_matrix(rng):
    for _ in range(20):
        info = minimal_polynomial(random_hermitian(rng, 4))
        assert info.mu == 4
        rows = np.array([alpha_at(info, j * 0.37).values for j in range(info.mu)])
        assert abs(np.linalg.det(rows)) > 1e-10


# ============================================================================
# Propagator and the finite expansion
# ============================================================================

def test_expansion_reproduces_propagator():
    rng = np.random.default_rng(1)
    for _ in range(50):
        d = int(rng.integers(1, 6))
        H = random_hermitian(rng, d)
        t = float(rng.uniform(0.0, 10.0))
        exact = propagator(H, t).entries
        assert np.linalg.norm(expansion_operator(H, t) - exact) < 1e-8


def test_expansion_with_degenerate_spectrum():
    H = np.diag([1.0, 1.0, 2.0])
    t = 0.9
    assert np.allclose(expansion_operator(H, t), np.diag(np.exp(-1j * np.array([1.0, 1.0, 2.0]) * t)), atol=1e-12)


def test_propagator_properties(rng):
    H = random_hermitian(rng, 3)
    assert np.allclose(propagator(H, 0.0).entries, np.eye(3))
    U = propagator(H, 1.7).entries
    assert np.allclose(U @ U.conj().T, np.eye(3), atol=1e-12)
    assert np.allclose(propagator(H, 0.4).entries @ propagator(H, 0.6).entries, propagator(H, 1.0).entries)


def test_taylor_series_agrees_for_short_times(rng):
    H = random_hermitian(rng, 3)
    for t in (0.1, 0.5, 1.0):
        assert np.allclose(taylor_propagator(H, t), propagator(H, t).entries, atol=1e-10)


def test_matrix_powers_are_cached_and_read_only(sigma_y):
    powers = matrix_powers(sigma_y, 3)
    assert powers.shape == (3, 2, 2)
    assert np.allclose(powers[0], np.eye(2))
    assert np.allclose(powers[2], np.eye(2))
    assert not powers.flags.writeable
    assert matrix_powers(sigma_y, 3) is powers
    with pytest.raises(DomainError):
        matrix_powers(sigma_y, 0)
