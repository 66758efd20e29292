"""
Tests for state vectors, projectors, Bloch angles and fidelity.
"""

import math
import os
import sys

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st
from pydantic import ValidationError

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.errors import DegenerateInput, DimensionMismatch, DomainError
from src.models.state_models import BlochParameters, HermitianOperator, Projector, StateVector
from src.utils.state_utils import (
    bloch_to_state,
    canonical_phase,
    fidelity,
    make_state,
    random_state,
    state_to_bloch
)


# ============================================================================
# make_state / StateVector
# ============================================================================

def test_make_state_normalizes():
    state = make_state([3, 4j])
    assert state.dim == 2
    assert np.allclose(state.components, [0.6, 0.8j])
    assert np.vdot(state.components, state.components).real == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("components", [[], [1.0], [0, 0], [0, 0, 0]])
def test_make_state_rejects_degenerate_input(components):
    with pytest.raises(DegenerateInput):
        make_state(components)


def test_state_vector_requires_unit_norm():
    with pytest.raises(ValidationError):
        StateVector(components=[1, 1])


def test_state_vector_components_are_read_only():
    state = make_state([1, 1j])
    with pytest.raises(ValueError):
        state.components[0] = 0


def test_state_vector_json_round_trip():
    state = make_state([1, 2 - 1j, 0.5j])
    dumped = state.model_dump(mode="json")
    assert all(len(pair) == 2 for pair in dumped["components"])
    restored = StateVector.model_validate(dumped)
    assert np.allclose(restored.components, state.components, atol=1e-15)


def test_hermitian_operator_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        HermitianOperator(entries=[[0, 1], [0, 0]])


def test_projector_label_is_stripped_and_required():
    direction = make_state([1, 0])
    assert Projector(direction=direction, label=" M1 ").label == "M1"
    with pytest.raises(ValidationError):
        Projector(direction=direction, label="   ")


def test_projector_matrix_is_rank_one_idempotent():
    projector = Projector(direction=make_state([2, 1j]), label="M2")
    matrix = projector.matrix
    assert np.allclose(matrix @ matrix, matrix)
    assert np.trace(matrix).real == pytest.approx(1.0)


# ============================================================================
# Phase and fidelity
# ============================================================================

def test_canonical_phase_makes_first_nonzero_component_real():
    rotated = canonical_phase(np.exp(0.7j) * np.array([0, 1j, 1]))
    assert rotated[0] == 0
    assert rotated[1].imag == pytest.approx(0.0, abs=1e-15)
    assert rotated[1].real > 0


def test_fidelity_values():
    a = make_state([1, 0])
    b = make_state([1, 1])
    assert fidelity(a, b) == pytest.approx(0.5)
    assert fidelity(a, make_state([0, 1])) == pytest.approx(0.0)


def test_fidelity_ignores_global_phase(rng):
    state = random_state(4, rng)
    rotated = StateVector(components=np.exp(1.234j) * state.components)
    assert fidelity(state, rotated) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_is_symmetric_bounded_and_phase_blind(rng):
    for trial in range(120):
        d = 2 + trial % 4
        a, b = random_state(d, rng), random_state(d, rng)
        value = fidelity(a, b)
        assert 0.0 <= value <= 1.0 + 1e-12
        assert fidelity(b, a) == pytest.approx(value, abs=1e-14)
        phases = np.exp(1j * rng.uniform(0, 2 * math.pi, size=2))
        shifted_a = StateVector(components=phases[0] * a.components)
        shifted_b = StateVector(components=phases[1] * b.components)
        assert fidelity(shifted_a, shifted_b) == pytest.approx(value, abs=1e-12)


def test_fidelity_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        fidelity(make_state([1, 0]), make_state([1, 0, 0]))


def test_random_state_is_seeded():
    first = random_state(3, np.random.default_rng(5))
    second = random_state(3, np.random.default_rng(5))
    assert np.array_equal(first.components, second.components)


# ============================================================================
# Bloch parametrization
# ============================================================================

def test_bloch_to_state_values():
    assert np.allclose(bloch_to_state((0.0, 0.0)).components, [1, 0])
    assert np.allclose(bloch_to_state((math.pi / 2, 0.0)).components, np.array([1, 1]) / math.sqrt(2))
    assert np.allclose(bloch_to_state((math.pi / 2, math.pi / 2)).components, np.array([1, 1j]) / math.sqrt(2))
    assert fidelity(bloch_to_state((math.pi, 0.0)), make_state([0, 1])) == pytest.approx(1.0)


@pytest.mark.parametrize("theta", [-0.1, 4.0, float("nan")])
def test_bloch_to_state_rejects_bad_theta(theta):
    with pytest.raises(DomainError):
        bloch_to_state((theta, 0.0))


def test_bloch_phi_is_wrapped():
    assert BlochParameters(theta=1.0, phi=-math.pi / 2).phi == pytest.approx(3 * math.pi / 2)
    assert BlochParameters(theta=1.0, phi=2 * math.pi).phi == 0.0


def test_state_to_bloch_removes_global_phase():
    state = StateVector(components=np.exp(0.3j) * np.array([1, 1j]) / math.sqrt(2))
    angles = state_to_bloch(state)
    assert angles.theta == pytest.approx(math.pi / 2)
    assert angles.phi == pytest.approx(math.pi / 2)


def test_state_to_bloch_at_poles_reports_zero_azimuth():
    assert state_to_bloch(make_state([0, 1j])).phi == 0.0
    assert state_to_bloch(make_state([1j, 0])).theta == 0.0


def test_state_to_bloch_requires_qubit():
    with pytest.raises(DimensionMismatch):
        state_to_bloch(make_state([1, 0, 0]))


@hypothesis_settings(max_examples=200, deadline=None)
@given(
    theta=st.floats(min_value=1e-3, max_value=math.pi - 1e-3),
    phi=st.floats(min_value=0.0, max_value=2 * math.pi - 1e-3)
)
def test_bloch_round_trip(theta, phi):
    angles = state_to_bloch(bloch_to_state((theta, phi)))
    assert angles.theta == pytest.approx(theta, abs=1e-9)
    assert angles.phi == pytest.approx(phi, abs=1e-9)
