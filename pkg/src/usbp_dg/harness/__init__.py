"""Experiment configuration, runners and the ``usbp-dg`` command line."""

from .config import DEFAULTS, Experiment, ExperimentConfig, load_config, make_config
from .experiments import (
    RunOutput,
    collect_rows,
    free_stream_residual,
    load_operator_bundle,
    read_csv,
    run,
)

__all__ = [
    "DEFAULTS",
    "Experiment",
    "ExperimentConfig",
    "RunOutput",
    "collect_rows",
    "free_stream_residual",
    "load_config",
    "load_operator_bundle",
    "make_config",
    "read_csv",
    "run",
]
