"""
Agent 2: Measurement Simulation Agent
Produces measurement records for a known initial state under both data
models, and scans the discrepancy between them.
"""

import logging
import math
from typing import Any, Dict, List, Optional

import numpy as np

from src.models.experiment_models import ExperimentConfig, ValidationGrid
from src.models.measurement_models import MeasurementRecord
from src.models.state_models import StateVector
from src.settings import Settings, get_settings
from src.utils.data_access import build_hamiltonian, build_projectors, resolve_times
from src.utils.spectral_utils import minimal_polynomial
from src.utils.measurement_utils import discrepancy_profile, simulate_records

logger = logging.getLogger(__name__)


class MeasurementSimulationAgent:
    """
    Agent responsible for forward simulation: exact and factored records,
    shot noise, and model validation scans.
    """

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the Measurement Simulation Agent.

        Args:
            settings: Runtime settings (default: global settings)
        """
        self.settings = settings or get_settings()

    def simulate(self, config: ExperimentConfig, truth: StateVector) -> Dict[str, List[MeasurementRecord]]:
        """
        Records of both models at the configured times.
        Shot noise applies to the exact model only.

        Args:
            config: Validated experiment configuration
            truth: Initial state

        Returns:
            {"exact": [...], "factored": [...]}
        """
        H = build_hamiltonian(config)
        projectors = build_projectors(config)
        times = resolve_times(config, minimal_polynomial(H))
        return {
            "exact": simulate_records(H, truth, projectors, times, model="exact", shots=config.shots, seed=config.seed),
            "factored": simulate_records(H, truth, projectors, times, model="factored")
        }

    def process(self, config: ExperimentConfig, truth: StateVector) -> Dict[str, Any]:
        """
        Main processing method - simulate the configured experiment.

        Args:
            config: Validated experiment configuration
            truth: Initial state

        Returns:
            Results payload for the simulate report
        """
        logger.info("[Agent 2: Measurement Simulation] Simulating records...")
        records = self.simulate(config, truth)
        logger.info(
            f"[Agent 2] ✓ {len(records['exact'])} records per model "
            f"(shots={config.shots}, data model {config.data_model})"
        )
        return {
            "times": sorted({record.time for record in records["exact"]}),
            "data_model": config.data_model,
            "exact": [record.model_dump(mode="json") for record in records["exact"]],
            "factored": [record.model_dump(mode="json") for record in records["factored"]]
        }

    def validate(self, config: ExperimentConfig, truth: StateVector) -> Dict[str, Any]:
        """
        Scan the model discrepancy over the validation grid.

        Args:
            config: Validated experiment configuration
            truth: Initial state

        Returns:
            Results payload for the validate-model report
        """
        grid = config.validation or ValidationGrid(horizon=math.pi, points=self.settings.validation_points)
        times = np.linspace(0.0, grid.horizon, grid.points).tolist()
        logger.info(f"[Agent 2: Measurement Simulation] Scanning {grid.points} instants on [0, {grid.horizon}]...")

        profile = discrepancy_profile(build_hamiltonian(config), truth, build_projectors(config), times)
        overall = max(entry["max"] for entry in profile.values())
        logger.info(f"[Agent 2] ✓ Max discrepancy {overall:.6f}")
        return {
            "grid": {"horizon": grid.horizon, "points": grid.points},
            "per_projector": profile,
            "max_discrepancy": overall
        }


__all__ = ['MeasurementSimulationAgent']
