"""
Data models for the services layer.

All models are dataclasses for the services layer.
"""

from .harness_data import DatasetSummary, ExperimentResult, RunProgress, RunResult, SeedSetup
from .linalg_data import KktSolution, Matrix, Vector
from .metrics_data import (
    TRAJECTORY_HEADER,
    BestIterate,
    IterateRecord,
    MetricSummary,
    RunLog,
    TrajectoryPoint,
)
from .problem_data import Dataset
from .solver_data import (
    AdaptiveStep,
    ConstantStep,
    EvalCounter,
    MeritState,
    SamplingMode,
    SolverState,
    SqpSettings,
    StepCase,
    StepRule,
    StepTrace,
    SubgradSettings,
)

__all__ = [
    "TRAJECTORY_HEADER",
    "AdaptiveStep",
    "BestIterate",
    "ConstantStep",
    "Dataset",
    "DatasetSummary",
    "EvalCounter",
    "ExperimentResult",
    "IterateRecord",
    "KktSolution",
    "Matrix",
    "MeritState",
    "MetricSummary",
    "RunLog",
    "RunProgress",
    "RunResult",
    "SamplingMode",
    "SeedSetup",
    "SolverState",
    "SqpSettings",
    "StepCase",
    "StepRule",
    "StepTrace",
    "SubgradSettings",
    "TrajectoryPoint",
    "Vector",
]
