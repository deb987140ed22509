"""
Stochastic gradient estimators.

    mini-batch:  g̃ = (1/b) Σ_{i∈I} ∇fᵢ(x)
    SVRG:        ḡ = g̃(x) - g̃(x_ref) + ∇f(x_ref), both batch terms on the same I

Both are unbiased for ∇f(x) under uniform sampling. Evaluations are charged
to an EvalCounter: b per mini-batch gradient, 2b per SVRG gradient, or b when
the reference component gradients are cached for the outer iteration.
"""

import logging
from typing import Optional

import numpy as np

from ..models.linalg_data import Matrix, Vector
from ..models.solver_data import EvalCounter
from ..problems.problem import Problem

logger = logging.getLogger(__name__)


class ReferenceGradientCache:
    """All component gradients at the reference point, O(N·n) memory."""

    def __init__(self, x_ref: Vector, rows: Matrix):
        self.x_ref = x_ref
        self.rows = rows

    @classmethod
    def build(cls, problem: Problem, x_ref: Vector) -> "ReferenceGradientCache":
        # charged together with the outer full gradient: one pass over the data
        rows = problem.component_gradients(np.arange(problem.N), x_ref)
        logger.debug(f"Cached {rows.shape[0]} reference component gradients")
        return cls(x_ref=x_ref.copy(), rows=rows)

    def batch_mean(self, batch: np.ndarray) -> Vector:
        return self.rows[batch].mean(axis=0)


def minibatch_gradient(
    problem: Problem,
    x: Vector,
    batch: np.ndarray,
    counter: Optional[EvalCounter] = None,
) -> Vector:
    """(1/b) Σ_{i∈batch} ∇fᵢ(x); charges b component evaluations."""
    g = problem.batch_gradient(batch, x)
    if counter is not None:
        counter.charge_components(len(batch))
    return g


def svrg_gradient(
    problem: Problem,
    x: Vector,
    x_ref: Vector,
    g_ref: Vector,
    batch: np.ndarray,
    counter: Optional[EvalCounter] = None,
    reference: Optional[ReferenceGradientCache] = None,
) -> Vector:
    """Variance-reduced gradient at x around the reference point x_ref.

    Args:
        problem: Problem oracles
        x: Current iterate
        x_ref: Reference point of the outer iteration
        g_ref: Full gradient at x_ref
        batch: Index batch shared by both mini-batch terms
        counter: Evaluation counter to charge
        reference: Cached reference component gradients, if enabled

    Returns:
        ḡ; equals g_ref exactly when x == x_ref
    """
    if reference is not None:
        current = problem.component_gradients(batch, x).mean(axis=0)
        g = current - reference.batch_mean(batch) + g_ref
        charged = len(batch)
    else:
        g = problem.batch_gradient(batch, x) - problem.batch_gradient(batch, x_ref) + g_ref
        charged = 2 * len(batch)

    if counter is not None:
        counter.charge_components(charged)
    return g


def full_gradient(problem: Problem, x: Vector, counter: Optional[EvalCounter] = None) -> Vector:
    """∇f(x); charges one full pass."""
    g = problem.full_gradient(x)
    if counter is not None:
        counter.charge_full()
    return g
