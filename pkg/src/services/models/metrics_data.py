"""
Data models for run logs and evaluation metrics.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

TRAJECTORY_HEADER = ("epoch", "outer_k", "inner_s", "feasibility_inf", "stationarity_inf", "merit", "tau", "step")


@dataclass(frozen=True)
class IterateRecord:
    """Metrics of the iterate produced by one inner iteration."""

    epoch: float
    outer_k: int
    inner_s: int
    feasibility_inf: float  # ‖c(x)‖∞
    stationarity_inf: float  # ‖∇f(x) + J(x)ᵀ y_ls‖∞
    merit: float  # τ̄ f(x) + ‖c(x)‖₁
    tau: float
    step: float

    def as_row(self) -> tuple:
        return (
            self.epoch,
            self.outer_k,
            self.inner_s,
            self.feasibility_inf,
            self.stationarity_inf,
            self.merit,
            self.tau,
            self.step,
        )


@dataclass
class RunLog:
    """Result of one solver run."""

    solver: str
    records: List[IterateRecord] = field(default_factory=list)
    x_final: Optional[np.ndarray] = None
    component_grad_evals: int = 0
    full_grad_evals: int = 0
    metric_evaluations: int = 0  # full-gradient evaluations spent on metrics, not on the algorithm
    kkt_solves: int = 0
    zero_direction_steps: int = 0
    diverged: bool = False  # stopped early with ‖x‖∞ above the divergence bound

    def __len__(self) -> int:
        return len(self.records)

    @property
    def epochs(self) -> float:
        return self.records[-1].epoch if self.records else 0.0


@dataclass(frozen=True)
class BestIterate:
    """The iterate selected by the best-iterate rule."""

    index: int
    feasibility_inf: float
    stationarity_inf: float
    feasible: bool  # whether the feasibility threshold was met


@dataclass(frozen=True)
class MetricSummary:
    """Mean, 95% half-width and median of one metric across runs."""

    metric: str
    mean: float
    halfwidth95: float
    median: float
    runs: int


@dataclass(frozen=True)
class TrajectoryPoint:
    """Cross-seed average of one record position."""

    index: int
    epoch: float
    feasibility_mean: float
    feasibility_halfwidth95: float
    stationarity_mean: float
    stationarity_halfwidth95: float
