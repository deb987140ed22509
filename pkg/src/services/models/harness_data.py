"""
Data models for experiment orchestration.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Protocol

from .linalg_data import Vector
from .metrics_data import BestIterate, MetricSummary, RunLog
from .problem_data import Dataset


class RunProgress(Protocol):
    """Protocol for progress reporting while an experiment runs."""

    def __call__(self, done: int, total: int, message: str) -> None:
        """Report progress.

        Args:
            done: Runs finished so far
            total: Runs in the experiment
            message: Human-readable description of the run that just finished
        """
        ...


@dataclass
class SeedSetup:
    """Per-seed quantities shared by every solver run on that seed."""

    seed: int
    x0: Vector
    lipschitz: float
    y0: Optional[Vector] = None  # None if J(x0) is rank deficient


@dataclass
class RunResult:
    """One (solver, seed) run."""

    solver: str
    seed: int
    log: RunLog
    best: BestIterate
    wall_seconds: float
    batch_size: int
    inner_length: int


@dataclass
class DatasetSummary:
    """What `info` reports about a dataset."""

    path: str
    num_samples: int
    num_features: int
    label_histogram: Dict[int, int]

    @classmethod
    def of(cls, dataset: Dataset) -> "DatasetSummary":
        return cls(
            path=dataset.source,
            num_samples=dataset.num_samples,
            num_features=dataset.num_features,
            label_histogram=dataset.label_histogram(),
        )


@dataclass
class ExperimentResult:
    """Files written by an experiment and the aggregate tables."""

    out_dir: Path
    summary_file: Path
    metadata_file: Path
    aggregate_file: Optional[Path] = None
    trajectory_files: List[Path] = field(default_factory=list)
    trajectory_mean_files: List[Path] = field(default_factory=list)
    runs: List[RunResult] = field(default_factory=list)
    aggregates: Dict[str, Dict[str, MetricSummary]] = field(default_factory=dict)
