"""
Agent 1: Frame Analysis Agent
Builds the Krylov frame induced by the Hamiltonian and projectors, picks or
validates the time instants, and certifies the frame (spanning and injectivity).
"""

import logging
from typing import Any, Dict, Optional

from src.models.experiment_models import ExperimentConfig
from src.settings import Settings, get_settings
from src.utils.data_access import build_hamiltonian, build_projectors, resolve_times
from src.utils.spectral_utils import minimal_polynomial
from src.utils.frame_utils import build_frame, check_necessary_condition
from src.utils.injectivity_utils import check_injectivity
from src.utils.reconstruction_utils import check_theorem1, lambda_determinant, lambda_matrix

logger = logging.getLogger(__name__)


class FrameAnalysisAgent:
    """
    Agent responsible for the static analysis of an experiment: μ, time
    instants, det Λ and the two frame verdicts.
    """

    def __init__(self, settings: Optional[Settings] = None, attempts: Optional[int] = None):
        """
        Initialize the Frame Analysis Agent.

        Args:
            settings: Runtime settings (default: global settings)
            attempts: Witness search starts (default from settings)
        """
        self.settings = settings or get_settings()
        self.attempts = attempts or self.settings.injectivity_attempts

    def process(self, config: ExperimentConfig) -> Dict[str, Any]:
        """
        Main processing method - analyze the configured experiment.

        Args:
            config: Validated experiment configuration

        Returns:
            Results payload for the analyze report
        """
        logger.info("[Agent 1: Frame Analysis] Starting analysis...")
        H = build_hamiltonian(config)
        projectors = build_projectors(config)

        info = minimal_polynomial(H)
        logger.info(f"  - Minimal polynomial degree μ = {info.mu}")

        times = resolve_times(config, info)
        lm = lambda_matrix(info, times)
        det_lambda = lambda_determinant(lm)
        valid = check_theorem1(lm, info.mu)
        logger.info(f"  - Times {times}: Λ {'invertible' if valid else 'singular'}")

        frame = build_frame(H, projectors)
        spanning = check_necessary_condition(frame)
        logger.info(f"  - Frame of {frame.size} vectors, rank {spanning.rank}")

        attempts = config.injectivity_attempts or self.attempts
        injectivity = check_injectivity(frame, attempts=attempts, seed=config.seed)
        logger.info(f"[Agent 1] ✓ Analysis complete: {injectivity.status.value}")

        return {
            "mu": info.mu,
            "distinct_eigenvalues": info.distinct_eigenvalues,
            "times": times,
            "lambda": lm.entries,
            "det_lambda": det_lambda,
            "abs_det_lambda": abs(det_lambda) if det_lambda is not None else None,
            "lambda_invertible": valid,
            "frame_size": frame.size,
            "spanning": spanning.model_dump(mode="json"),
            "injectivity": injectivity.model_dump(mode="json")
        }


__all__ = ['FrameAnalysisAgent']
