"""
Main orchestration pipeline for the stroboscopic tomography toolkit.
Parses experiment configurations, runs the agents for each command and
emits machine-readable JSON reports.
"""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src import __version__
from src.errors import ConfigError, StroboscopicError
from src.models.experiment_models import ExperimentConfig, RunReport, Versions
from src.models.measurement_models import MeasurementRecord
from src.settings import get_settings
from src.agents.analysis_agent import FrameAnalysisAgent
from src.agents.simulation_agent import MeasurementSimulationAgent
from src.agents.reconstruction_agent import StateReconstructionAgent
from src.utils.data_access import (
    ExperimentStore,
    build_truth,
    load_measurements,
    save_measurements,
    save_report
)

logger = logging.getLogger(__name__)

COMMANDS = ("analyze", "simulate", "reconstruct", "validate-model")
EXIT_INTERRUPTED = 130


def setup_logging(level: Optional[str] = None) -> None:
    """
    Send log records to stderr so stdout carries only the report.

    Args:
        level: Logging level name (default from settings)
    """
    logging.basicConfig(
        level=(level or get_settings().log_level).upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True
    )


def make_report(command: str, config: ExperimentConfig, results: Dict[str, Any]) -> RunReport:
    """Wrap a results payload with the config echo and version block."""
    return RunReport(
        command=command,
        config_echo=config.model_dump(mode="json"),
        results=results,
        versions=Versions(schema_version=get_settings().schema_version, artifact=__version__)
    )


def _require_truth(config: ExperimentConfig, command: str):
    truth = build_truth(config)
    if truth is None:
        raise ConfigError(f"'{command}' requires a 'truth' entry in the configuration")
    return truth


def cmd_analyze(config: ExperimentConfig) -> RunReport:
    """
    μ, time instants, det Λ and the frame verdicts.

    Args:
        config: Validated experiment configuration

    Returns:
        RunReport for the analyze command
    """
    return make_report("analyze", config, FrameAnalysisAgent().process(config))


def cmd_simulate(config: ExperimentConfig) -> RunReport:
    """
    Measurement records for the configured truth under both data models.

    Raises:
        ConfigError: If the configuration has no truth
    """
    truth = _require_truth(config, "simulate")
    return make_report("simulate", config, MeasurementSimulationAgent().process(config, truth))


def cmd_reconstruct(config: ExperimentConfig, data_path: str) -> RunReport:
    """
    Reconstruct the initial state from a data file.

    Args:
        config: Validated experiment configuration
        data_path: JSON list of measurement records

    Returns:
        RunReport whose results hold the ReconstructionReport
    """
    data = load_measurements(data_path)
    report = StateReconstructionAgent().process(config, data)
    return make_report("reconstruct", config, report.model_dump(mode="json"))


def cmd_validate_model(config: ExperimentConfig) -> RunReport:
    """
    Discrepancy between the exact and factored models over a time grid.

    Raises:
        ConfigError: If the configuration has no truth
    """
    truth = _require_truth(config, "validate-model")
    return make_report("validate-model", config, MeasurementSimulationAgent().validate(config, truth))


def simulated_data(report: RunReport) -> List[MeasurementRecord]:
    """Records of the configured data model from a simulate report."""
    model = report.results["data_model"]
    return [MeasurementRecord.model_validate(record) for record in report.results[model]]


def build_parser() -> argparse.ArgumentParser:
    """Command-line interface."""
    parser = argparse.ArgumentParser(
        prog="strobo",
        description="Stroboscopic phase retrieval: analyze, simulate and reconstruct pure states"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="Logging level (default from STROBO_LOG_LEVEL)")
    parser.add_argument("command", choices=COMMANDS, help="Command to run")
    parser.add_argument("--config", required=True, help="Experiment configuration (JSON)")
    parser.add_argument(
        "--data",
        default=None,
        help="Data file: input for reconstruct, output for simulate"
    )
    parser.add_argument("--out", default=None, help="Report path (default: stdout)")
    parser.add_argument("--seed", type=int, default=None, help="Override the configuration seed")
    parser.add_argument("--mode", choices=("factored", "exact-fit"), default=None, help="Override the reconstruction mode")
    return parser


def run(args: argparse.Namespace) -> RunReport:
    """Execute one parsed command and write its outputs."""
    store = ExperimentStore(args.config)
    store.load_config()
    config = store.override(seed=args.seed, mode=args.mode)

    if args.command == "analyze":
        report = cmd_analyze(config)
    elif args.command == "simulate":
        report = cmd_simulate(config)
        if args.data:
            save_measurements(simulated_data(report), args.data)
            logger.info(f"Data written to {args.data}")
    elif args.command == "reconstruct":
        if not args.data:
            raise ConfigError("reconstruct requires --data")
        report = cmd_reconstruct(config, args.data)
    else:
        report = cmd_validate_model(config)

    if args.out:
        save_report(report, args.out)
        logger.info(f"Report written to {args.out}")
    else:
        sys.stdout.write(report.to_json())
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point.

    Returns:
        Process exit code (0 on success, the error's exit code otherwise)
    """
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        run(args)
        return 0
    except KeyboardInterrupt:
        logger.error("Interrupted")
        return EXIT_INTERRUPTED
    except StroboscopicError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except ValidationError as e:
        logger.error(f"Invalid value: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
