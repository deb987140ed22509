"""
Experiment harness: TOML configuration and (solver, seed) orchestration.
"""

from .experiment_config import ExperimentConfig, load_config, parse_config, resolve_inner_length
from .experiment_service import ExperimentService, format_value, initial_point, make_constraint

__all__ = [
    "ExperimentConfig",
    "ExperimentService",
    "format_value",
    "initial_point",
    "load_config",
    "make_constraint",
    "parse_config",
    "resolve_inner_length",
]
