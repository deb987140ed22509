"""Pydantic response models for MCP tools.

These models provide proper output schemas for FastMCP's automatic
structuredContent generation.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from src.models.types import CoercedInt

# =============================================================================
# Dataset Tools
# =============================================================================


class DatasetInfoResponse(BaseModel):
    """Response for dataset_info tool."""

    success: bool
    path: str
    num_samples: Optional[CoercedInt] = Field(default=None, description="N, number of data points")
    num_features: Optional[CoercedInt] = Field(default=None, description="n, feature dimension")
    label_histogram: Dict[str, int] = Field(default_factory=dict, description="Samples per label (-1 / 1)")
    error: Optional[str] = None


# =============================================================================
# Experiment Tools
# =============================================================================


class ValidateExperimentResponse(BaseModel):
    """Response for validate_experiment tool."""

    success: bool
    config_path: str
    resolved: Dict[str, Any] = Field(
        default_factory=dict, description="Parameters after resolving N-dependent values such as S = N/2b"
    )
    error: Optional[str] = None


class MetricRow(BaseModel):
    """Cross-seed summary of one best-iterate metric for one solver."""

    solver: str = Field(description="Solver label from the config")
    metric: str = Field(description="'feasibility' (‖c‖∞) or 'stationarity' (KKT residual ‖·‖∞)")
    mean: float = Field(description="Mean over seeds")
    halfwidth95: float = Field(description="Half-width of the 95% confidence interval")
    median: float = Field(description="Median over seeds")
    runs: CoercedInt = Field(description="Number of seeds")


class RunSummaryRow(BaseModel):
    """Best iterate of one (solver, seed) run."""

    solver: str
    seed: CoercedInt
    best_feasibility: float
    best_stationarity: float
    iterations: CoercedInt = Field(description="Inner iterations performed")
    epochs: float = Field(description="Effective passes over the data spent")


class RunExperimentResponse(BaseModel):
    """Response for run_experiment tool."""

    success: bool
    config_path: str
    out_dir: Optional[str] = None
    summary_file: Optional[str] = None
    aggregate_file: Optional[str] = None
    metadata_file: Optional[str] = None
    trajectory_files: List[str] = Field(default_factory=list)
    runs: List[RunSummaryRow] = Field(default_factory=list)
    aggregate: List[MetricRow] = Field(default_factory=list)
    error: Optional[str] = None
