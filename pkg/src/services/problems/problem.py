"""
Constrained finite-sum problem: min f(x) = (1/N) Σᵢ fᵢ(x)  s.t.  c(x) = 0.

A Problem pairs a FiniteSumObjective with a Constraint and is read-only
after construction, so its oracles can be evaluated from several threads.
"""

import logging
from typing import Tuple

import numpy as np

from ..models.linalg_data import Matrix, Vector
from ..models.problem_data import Dataset
from .constraints import Constraint
from .objectives import FiniteSumObjective, LogisticObjective

logger = logging.getLogger(__name__)

LIPSCHITZ_PROBES = 10
LIPSCHITZ_DELTA = 1e-2
LIPSCHITZ_FLOOR = 1e-12


class Problem:
    """Oracle bundle for an equality-constrained finite-sum problem."""

    def __init__(self, objective: FiniteSumObjective, constraint: Constraint, name: str = ""):
        self.f = objective
        self.c = constraint
        self.name = name

    @property
    def n(self) -> int:
        return self.f.dimension

    @property
    def N(self) -> int:
        return self.f.num_components

    @property
    def m(self) -> int:
        return self.c.num_constraints

    @property
    def gamma(self) -> float:
        return self.c.gamma

    def objective(self, x: Vector) -> float:
        return self.f.value(x)

    def full_gradient(self, x: Vector) -> Vector:
        return self.f.full_gradient(x)

    def component_gradient(self, i: int, x: Vector) -> Vector:
        return self.f.component_gradient(i, x)

    def component_gradients(self, batch: np.ndarray, x: Vector) -> Matrix:
        return self.f.component_gradients(batch, x)

    def batch_gradient(self, batch: np.ndarray, x: Vector) -> Vector:
        return self.f.batch_gradient(batch, x)

    def constraint(self, x: Vector) -> Vector:
        return self.c.value(x)

    def jacobian(self, x: Vector) -> Matrix:
        return self.c.jacobian(x)

    def constraint_and_jacobian(self, x: Vector) -> Tuple[Vector, Matrix]:
        return self.c.evaluate(x)

    def __repr__(self) -> str:
        return f"Problem(name={self.name!r}, N={self.N}, n={self.n}, m={self.m}, gamma={self.gamma})"


def build_problem(objective: FiniteSumObjective, constraint: Constraint, name: str = "") -> Problem:
    """Compose an objective and a constraint, checking that dimensions agree."""
    probe = np.zeros(objective.dimension)
    J = constraint.jacobian(probe)
    if J.shape[1] != objective.dimension:
        raise ValueError(f"constraint acts on {J.shape[1]} variables, objective on {objective.dimension}")
    return Problem(objective, constraint, name=name)


def build_logistic_problem(dataset: Dataset, constraint: Constraint) -> Problem:
    return build_problem(LogisticObjective(dataset), constraint, name=dataset.source)


def estimate_lipschitz(
    problem: Problem,
    x0: Vector,
    rng: np.random.Generator,
    probes: int = LIPSCHITZ_PROBES,
    delta: float = LIPSCHITZ_DELTA,
) -> float:
    """Estimate the gradient Lipschitz constant by gradient differences around x0.

    L = max over probes of ‖∇f(x0 + δu) - ∇f(x0)‖₂ / δ with u uniform on the
    unit sphere. Each probe is a lower bound on the true constant.

    Returns:
        Positive estimate; deterministic for a given generator state
    """
    g0 = problem.full_gradient(x0)
    best = 0.0
    for _ in range(probes):
        u = rng.standard_normal(problem.n)
        u /= np.linalg.norm(u)
        g = problem.full_gradient(x0 + delta * u)
        best = max(best, float(np.linalg.norm(g - g0)) / delta)

    if best <= LIPSCHITZ_FLOOR:
        logger.warning(f"Lipschitz estimate {best:.3e} is not positive, using {LIPSCHITZ_FLOOR}")
        best = LIPSCHITZ_FLOOR
    logger.debug(f"Estimated L={best:.6g} from {probes} probes at delta={delta}")
    return best
