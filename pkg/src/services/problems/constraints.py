"""
Equality constraints c(x) = 0 for the benchmark problems.

Linear:  c(x) = A x - a₁,   J(x) = A,     Γ = 0
L2 ball: c(x) = ‖x‖₂² - a₂, J(x) = 2 xᵀ,  Γ = 2
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import RankDeficientJacobian
from ..linalg.kkt_solver import jacobian_gram_factor
from ..models.linalg_data import Matrix, Vector

logger = logging.getLogger(__name__)

MAX_GENERATION_ATTEMPTS = 3


class Constraint(ABC):
    """Equality constraint oracle: values, Jacobian and the Jacobian's Lipschitz constant Γ."""

    @property
    @abstractmethod
    def num_constraints(self) -> int:
        """m"""

    @property
    @abstractmethod
    def gamma(self) -> float:
        """Γ, the sum of the constraint gradients' Lipschitz constants."""

    @abstractmethod
    def value(self, x: Vector) -> Vector:
        """c(x), length m"""

    @abstractmethod
    def jacobian(self, x: Vector) -> Matrix:
        """J(x), shape m×n"""

    def evaluate(self, x: Vector) -> Tuple[Vector, Matrix]:
        return self.value(x), self.jacobian(x)

    @abstractmethod
    def describe(self) -> dict:
        """Summary for run metadata."""


@dataclass(frozen=True, eq=False)
class LinearConstraint(Constraint):
    """A x = a₁ with a dense m×n matrix A."""

    A: Matrix
    a1: Vector

    @property
    def num_constraints(self) -> int:
        return self.A.shape[0]

    @property
    def gamma(self) -> float:
        return 0.0

    def value(self, x: Vector) -> Vector:
        return self.A @ x - self.a1

    def jacobian(self, x: Vector) -> Matrix:
        return self.A

    def describe(self) -> dict:
        return {
            "kind": "linear",
            "m": self.num_constraints,
            "a1_norm": float(np.linalg.norm(self.a1)),
            "A_frobenius": float(np.linalg.norm(self.A)),
        }


def l2ball_constraint(x: Vector, a2: float = 1.0) -> Tuple[Vector, Matrix]:
    """c(x) = ‖x‖₂² - a₂ and J(x) = 2xᵀ. J vanishes at the origin, where LICQ fails."""
    c = np.array([float(x @ x) - a2])
    J = 2.0 * x[None, :]
    return c, J


@dataclass(frozen=True)
class L2BallConstraint(Constraint):
    """‖x‖₂² = a₂ (a sphere; the name follows the benchmark's convention)."""

    a2: float = 1.0

    def __post_init__(self):
        if not self.a2 > 0:
            raise ValueError(f"a2 must be positive, got {self.a2}")

    @property
    def num_constraints(self) -> int:
        return 1

    @property
    def gamma(self) -> float:
        return 2.0

    def value(self, x: Vector) -> Vector:
        return l2ball_constraint(x, self.a2)[0]

    def jacobian(self, x: Vector) -> Matrix:
        return l2ball_constraint(x, self.a2)[1]

    def evaluate(self, x: Vector) -> Tuple[Vector, Matrix]:
        return l2ball_constraint(x, self.a2)

    def describe(self) -> dict:
        return {"kind": "l2ball", "m": 1, "a2": self.a2}


def make_linear_constraints(n: int, m: int, rng: np.random.Generator) -> LinearConstraint:
    """Draw A and a₁ with i.i.d. standard normal entries.

    a₁ is not projected onto the range of A; for m < n the system is
    feasible almost surely.

    Raises:
        RankDeficientJacobian: If MAX_GENERATION_ATTEMPTS draws all fail the rank test
    """
    if not 0 < m < n:
        raise ValueError(f"need 0 < m < n, got m={m}, n={n}")

    for attempt in range(1, MAX_GENERATION_ATTEMPTS + 1):
        A = rng.standard_normal((m, n))
        a1 = rng.standard_normal(m)
        try:
            jacobian_gram_factor(A)
        except RankDeficientJacobian:
            logger.warning(f"Random A ({m}×{n}) failed the rank test on attempt {attempt}, regenerating")
            continue
        return LinearConstraint(A=A, a1=a1)

    raise RankDeficientJacobian(f"could not draw a full-rank {m}×{n} A in {MAX_GENERATION_ATTEMPTS} attempts")
