"""
Evaluation protocol: feasibility and stationarity errors, best-iterate
selection, and cross-seed aggregation.

Metrics always use the exact full gradient and least-squares multipliers.
They read the problem only; solver counters are never touched, and callers
account for metric evaluations separately from the algorithm's budget.
"""

import logging
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..errors import InsufficientRuns
from ..linalg.kkt_solver import least_squares_multipliers
from ..models.linalg_data import Vector
from ..models.metrics_data import BestIterate, IterateRecord, MetricSummary, RunLog, TrajectoryPoint
from ..problems.problem import Problem

logger = logging.getLogger(__name__)

FEASIBILITY_THRESHOLD = 1e-6
CI_Z = 1.96  # normal approximation


def feasibility_error(problem: Problem, x: Vector) -> float:
    """‖c(x)‖∞"""
    return float(np.max(np.abs(problem.constraint(x))))


def stationarity_error(problem: Problem, x: Vector) -> float:
    """‖∇f(x) + J(x)ᵀ y_ls(x)‖∞ with least-squares multipliers.

    Raises:
        RankDeficientJacobian: If J(x) fails the rank test
    """
    g = problem.full_gradient(x)
    J = problem.jacobian(x)
    y = least_squares_multipliers(J, g)
    return float(np.max(np.abs(g + J.T @ y)))


def evaluate_iterate(problem: Problem, x: Vector) -> Tuple[float, float]:
    """(feasibility, stationarity) with one constraint evaluation."""
    c, J = problem.constraint_and_jacobian(x)
    g = problem.full_gradient(x)
    y = least_squares_multipliers(J, g)
    return float(np.max(np.abs(c))), float(np.max(np.abs(g + J.T @ y)))


def select_best(records: Sequence[IterateRecord], threshold: float = FEASIBILITY_THRESHOLD) -> BestIterate:
    """Best iterate of a run log.

    If no iterate reaches feasibility <= threshold, the least infeasible one is
    chosen; otherwise the most stationary among the feasible ones. Ties go to
    the earliest index.
    """
    if not records:
        raise ValueError("cannot select the best iterate of an empty log")

    feasibility = np.array([r.feasibility_inf for r in records])
    stationarity = np.array([r.stationarity_inf for r in records])

    feasible = feasibility <= threshold
    if not np.any(feasible):
        index = int(np.argmin(feasibility))  # argmin returns the first minimizer
    else:
        masked = np.where(feasible, stationarity, np.inf)
        if np.all(np.isinf(masked)):
            index = int(np.flatnonzero(feasible)[0])
        else:
            index = int(np.argmin(masked))

    return BestIterate(
        index=index,
        feasibility_inf=float(feasibility[index]),
        stationarity_inf=float(stationarity[index]),
        feasible=bool(feasible[index]),
    )


def _summarize(metric: str, values: np.ndarray) -> MetricSummary:
    R = len(values)
    mean = float(np.mean(values))
    if np.all(np.isfinite(values)):
        halfwidth = CI_Z * float(np.std(values, ddof=1)) / math.sqrt(R)
    else:
        halfwidth = math.inf
    return MetricSummary(metric=metric, mean=mean, halfwidth95=halfwidth, median=float(np.median(values)), runs=R)


def aggregate(runs: Sequence[BestIterate]) -> Dict[str, MetricSummary]:
    """Mean ± 1.96·s/√R (and median) of the best-iterate metrics.

    Raises:
        InsufficientRuns: With fewer than two runs
    """
    if len(runs) < 2:
        raise InsufficientRuns(f"need at least 2 runs for a confidence interval, got {len(runs)}")

    return {
        "feasibility": _summarize("feasibility", np.array([r.feasibility_inf for r in runs])),
        "stationarity": _summarize("stationarity", np.array([r.stationarity_inf for r in runs])),
    }


def aggregate_trajectories(logs: Sequence[RunLog]) -> List[TrajectoryPoint]:
    """Per-record cross-seed mean and 95% half-width, truncated to the shortest log.

    Raises:
        InsufficientRuns: With fewer than two logs
    """
    if len(logs) < 2:
        raise InsufficientRuns(f"need at least 2 runs to average trajectories, got {len(logs)}")

    length = min(len(log.records) for log in logs)
    if length < max(len(log.records) for log in logs):
        logger.debug(f"Truncating trajectories to {length} records")

    points = []
    for i in range(length):
        rows = [log.records[i] for log in logs]
        feas = _summarize("feasibility", np.array([r.feasibility_inf for r in rows]))
        stat = _summarize("stationarity", np.array([r.stationarity_inf for r in rows]))
        points.append(
            TrajectoryPoint(
                index=i,
                epoch=float(np.mean([r.epoch for r in rows])),
                feasibility_mean=feas.mean,
                feasibility_halfwidth95=feas.halfwidth95,
                stationarity_mean=stat.mean,
                stationarity_halfwidth95=stat.halfwidth95,
            )
        )
    return points
