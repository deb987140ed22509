"""
Exception hierarchy for the services layer.

Every error can carry a context dictionary (solver label, seed, outer_k,
inner_s, ...) that callers attach while the exception propagates, so a
failure deep inside a KKT solve still reports which run and iteration hit it.
"""

from typing import Any, Dict


class SvrSqpError(Exception):
    """Base class for all solver, data and configuration errors."""

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = {}

    def attach(self, **context: Any) -> "SvrSqpError":
        """Attach run coordinates without overwriting ones set closer to the failure."""
        for key, value in context.items():
            self.context.setdefault(key, value)
        return self

    def __str__(self) -> str:
        if not self.context:
            return self.message
        where = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{self.message} [{where}]"


# Linear algebra


class RankDeficientJacobian(SvrSqpError):
    """The constraint Jacobian fails the J Jᵀ pivot test (LICQ violated numerically)."""


class SingularKkt(SvrSqpError):
    """Factorization of the assembled KKT matrix broke down."""


class NotPositiveDefinite(SvrSqpError):
    """A Cholesky pivot fell below the relative threshold."""


# Data


class ParseError(SvrSqpError, ValueError):
    """Malformed LIBSVM input."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class LabelError(SvrSqpError, ValueError):
    """More than two distinct labels in a binary classification file."""


# Engine


class DegenerateDirection(SvrSqpError):
    """Positive q with zero constraint violation: the KKT solve was inaccurate."""


class InvariantViolation(SvrSqpError):
    """A per-iteration algorithmic invariant did not hold."""


class DivergedRun(SvrSqpError):
    """The first step already left the bounded region, so the run has no iterate to report."""


# Metrics


class InsufficientRuns(SvrSqpError, ValueError):
    """Confidence intervals need at least two runs."""


# Harness


class ConfigError(SvrSqpError, ValueError):
    """Invalid experiment configuration, naming the offending key."""

    def __init__(self, key: str, reason: str):
        super().__init__(f"{key}: {reason}")
        self.key = key
        self.reason = reason
