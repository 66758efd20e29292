"""
Shared fixtures for the test suite.
"""

import logging
import math
import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.models.state_models import Projector
from src.settings import reset_settings
from src.utils.state_utils import make_state
from src.utils.reconstruction_utils import SIGMA_Y

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(autouse=True)
def fresh_settings():
    """Every test starts from the environment defaults."""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture(autouse=True)
def restore_root_logger():
    """main() reconfigures the root logger; undo it after each test."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def sigma_y() -> np.ndarray:
    return SIGMA_Y.copy()


@pytest.fixture
def reference_projectors():
    """M1 along (-1, 2)/√5 and M2 along (2, i)/√5."""
    return [
        Projector(direction=make_state([-1, 2]), label="M1"),
        Projector(direction=make_state([2, 1j]), label="M2")
    ]


@pytest.fixture
def ground_state():
    return make_state([1, 0])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def quarter_period() -> float:
    return math.pi / 4


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    """Hermitian matrix with Gaussian entries."""
    a = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / 2
    return a + a.conj().T
