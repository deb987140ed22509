"""
Data models for gradient estimation and the SQP iteration.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np

from .linalg_data import Matrix, Vector


class SamplingMode(str, Enum):
    """How mini-batch indices are drawn from [N]."""

    WITH_REPLACEMENT = "with_replacement"
    """Independent uniform draws; matches the independence used by the variance bound."""

    WITHOUT_REPLACEMENT = "without_replacement"
    """A uniformly random subset of size b."""


@dataclass
class EvalCounter:
    """Gradient evaluation accounting, in units of component gradients."""

    num_components: int
    component_grad_evals: int = 0
    full_grad_evals: int = 0

    def charge_components(self, count: int) -> None:
        self.component_grad_evals += int(count)

    def charge_full(self) -> None:
        self.full_grad_evals += 1

    def epochs(self) -> float:
        """Effective passes over the data."""
        total = self.component_grad_evals + self.num_components * self.full_grad_evals
        return total / self.num_components


@dataclass
class MeritState:
    """Merit parameter τ̄ with its update constants σ and ε_τ."""

    tau: float
    sigma: float = 0.5
    eps_tau: float = 1e-6

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not 0 < self.sigma < 1:
            raise ValueError(f"sigma must be in (0, 1), got {self.sigma}")
        if not 0 < self.eps_tau < 1:
            raise ValueError(f"eps_tau must be in (0, 1), got {self.eps_tau}")


@dataclass(frozen=True)
class ConstantStep:
    """The same step size every iteration."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class AdaptiveStep:
    """Step minimizing an upper bound on the merit change, capped at alpha_u·beta."""

    beta: float
    alpha_u: float
    lipschitz: float
    gamma: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.alpha_u > 0:
            raise ValueError(f"alpha_u must be positive, got {self.alpha_u}")
        if not self.lipschitz > 0:
            raise ValueError(f"lipschitz must be positive, got {self.lipschitz}")
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")


StepRule = Union[ConstantStep, AdaptiveStep]


class StepCase(str, Enum):
    """Which branch of the step rule produced ᾱ."""

    CONSTANT = "constant"
    HAT = "hat"  # α̂ < 1
    UNIT = "unit"  # α̃ ≤ 1 ≤ α̂
    TILDE = "tilde"  # α̃ > 1
    ZERO_DIRECTION = "zero_direction"
    SUBGRADIENT = "subgradient"


@dataclass
class SqpSettings:
    """Inputs of the SQP-type solvers (SVR-SQP and its no-variance-reduction variant)."""

    x_init: Vector
    step: StepRule
    batch_size: int
    inner_length: int = 1
    epochs: float = 30.0
    tau_init: float = 0.1
    sigma: float = 0.5
    eps_tau: float = 1e-6
    hessian: Optional[Matrix] = None  # None means identity
    sampling: SamplingMode = SamplingMode.WITH_REPLACEMENT
    cache_reference_gradients: bool = False
    check_invariants: bool = True


@dataclass
class SubgradSettings:
    """Inputs of the variance-reduced stochastic subgradient method on the merit function."""

    x_init: Vector
    alpha: float
    tau: float
    lipschitz: float
    gamma: float
    batch_size: int
    inner_length: int = 1
    epochs: float = 30.0
    sampling: SamplingMode = SamplingMode.WITH_REPLACEMENT
    cache_reference_gradients: bool = False

    @property
    def step_size(self) -> float:
        """ᾱ = α / (τ L + Γ)"""
        return self.alpha / (self.tau * self.lipschitz + self.gamma)


@dataclass
class SolverState:
    """Mutable state of one run."""

    x: Vector
    x_ref: Vector
    g_ref: Vector
    merit: MeritState
    counters: EvalCounter
    outer_k: int = 0
    inner_s: int = 0


@dataclass
class StepTrace:
    """Everything one iteration computed, handed to the on_step callback."""

    outer_k: int
    inner_s: int
    x: Vector
    x_next: Vector
    g_bar: Vector
    d: Vector
    y: Vector
    c: Vector
    H: Optional[Matrix]  # None for first-order steps
    tau_before: float
    tau: float
    tau_trial: float
    alpha: float
    case: StepCase
    delta_l: float = 0.0
    q: float = 0.0
    alpha_hat: float = math.nan
    alpha_tilde: float = math.nan
    kkt_solves: int = 0
    extras: dict = field(default_factory=dict)


def identity_hessian(n: int) -> Matrix:
    return np.eye(n)
