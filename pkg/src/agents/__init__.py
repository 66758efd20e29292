"""
Package initialization for agents.
"""

from .analysis_agent import FrameAnalysisAgent
from .simulation_agent import MeasurementSimulationAgent
from .reconstruction_agent import StateReconstructionAgent

__all__ = [
    'FrameAnalysisAgent',
    'MeasurementSimulationAgent',
    'StateReconstructionAgent'
]
