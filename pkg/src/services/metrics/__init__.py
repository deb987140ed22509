"""
Evaluation metrics and best-iterate selection.
"""

from .metrics_service import (
    FEASIBILITY_THRESHOLD,
    aggregate,
    aggregate_trajectories,
    evaluate_iterate,
    feasibility_error,
    select_best,
    stationarity_error,
)

__all__ = [
    "FEASIBILITY_THRESHOLD",
    "aggregate",
    "aggregate_trajectories",
    "evaluate_iterate",
    "feasibility_error",
    "select_best",
    "stationarity_error",
]
