"""
Services layer for stochastic variance-reduced SQP.

This layer contains all numerical logic and has NO MCP dependencies.
It can be used by MCP tools, the CLI, notebooks, or any other interface.
"""

from .baselines import run_minibatch_sqp, run_sto_subgrad_vr
from .cache.dataset_cache import DatasetCache
from .harness.experiment_service import ExperimentService
from .problems.dataset_service import DatasetService
from .sqp import run_svr_sqp

__all__ = [
    "DatasetCache",
    "DatasetService",
    "ExperimentService",
    "run_minibatch_sqp",
    "run_sto_subgrad_vr",
    "run_svr_sqp",
]
