"""Pydantic models for MCP responses."""

from .tool_responses import (
    DatasetInfoResponse,
    MetricRow,
    RunExperimentResponse,
    RunSummaryRow,
    ValidateExperimentResponse,
)
from .types import CoercedInt

__all__ = [
    "CoercedInt",
    "DatasetInfoResponse",
    "MetricRow",
    "RunExperimentResponse",
    "RunSummaryRow",
    "ValidateExperimentResponse",
]
