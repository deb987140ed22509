"""
Merit function machinery of the SQP iteration.

    merit            φ(x, τ) = τ f(x) + ‖c(x)‖₁
    local model      l(x, τ, g, d) = τ (f(x) + gᵀd) + ‖c(x) + J(x) d‖₁
    model reduction  Δl = -τ gᵀd + ‖c‖₁             (valid when c + J d = 0)

The merit parameter only decreases: a trial value
τ_trial = (1-σ)‖c‖₁ / (gᵀd + max{dᵀHd, 0}) is computed when the denominator
is positive (otherwise τ_trial = ∞), and τ̄ drops to (1-ε_τ)·τ_trial only when
it exceeds τ_trial. This guarantees Δl ≥ τ̄·max{dᵀHd, 0} + σ‖c‖₁.
"""

import math
from dataclasses import replace
from typing import Tuple

import numpy as np

from ..errors import DegenerateDirection
from ..models.linalg_data import Matrix, Vector
from ..models.solver_data import AdaptiveStep, MeritState, StepCase
from ..problems.problem import Problem

TAU_TRIAL_INFINITE = math.inf
DEGENERATE_Q_TOL = 1e-10  # relative; q this small with c = 0 is roundoff


def merit_value(problem: Problem, x: Vector, tau: float) -> float:
    """φ(x, τ) = τ f(x) + ‖c(x)‖₁"""
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    return tau * problem.objective(x) + float(np.sum(np.abs(problem.constraint(x))))


def local_model(f_value: float, tau: float, g: Vector, d: Vector, c: Vector, J: Matrix) -> float:
    """l(x, τ, g, d) = τ (f(x) + gᵀd) + ‖c + J d‖₁"""
    return tau * (f_value + float(g @ d)) + float(np.sum(np.abs(c + J @ d)))


def model_reduction(tau: float, g: Vector, d: Vector, c: Vector) -> float:
    """Δl = -τ gᵀd + ‖c‖₁, assuming the linearized constraints hold along d."""
    return -tau * float(g @ d) + float(np.sum(np.abs(c)))


def trial_merit_parameter(g_bar: Vector, d_bar: Vector, H: Matrix, c: Vector, sigma: float) -> Tuple[float, float]:
    """Return (τ_trial, q) with q = ḡᵀd̄ + max{d̄ᵀHd̄, 0}.

    Raises:
        DegenerateDirection: If ‖c‖₁ = 0 while q > 0, which the KKT conditions
            rule out (q = cᵀȳ = 0); it signals an inaccurate KKT solve
    """
    gd = float(g_bar @ d_bar)
    dHd = float(d_bar @ H @ d_bar)
    q = gd + max(dHd, 0.0)
    c_l1 = float(np.sum(np.abs(c)))

    if q <= 0:
        return TAU_TRIAL_INFINITE, q
    if c_l1 == 0.0:
        if q > DEGENERATE_Q_TOL * max(1.0, abs(gd), abs(dHd)):
            raise DegenerateDirection(f"q={q:.3e} > 0 with zero constraint violation")
        return TAU_TRIAL_INFINITE, q
    return (1.0 - sigma) * c_l1 / q, q


def update_merit_parameter(merit: MeritState, g_bar: Vector, d_bar: Vector, H: Matrix, c: Vector) -> MeritState:
    """Apply the trial/decrease rule; returns a new MeritState (τ̄ never increases)."""
    tau_trial, _ = trial_merit_parameter(g_bar, d_bar, H, c, merit.sigma)
    if merit.tau <= tau_trial:
        return merit
    return replace(merit, tau=(1.0 - merit.eps_tau) * tau_trial)


def adaptive_step_with_case(
    rule: AdaptiveStep,
    tau: float,
    delta_l: float,
    d_bar_norm_sq: float,
    c_l1: float,
) -> Tuple[float, StepCase, float, float]:
    """Adaptive step plus the branch taken and both trial values (α, case, α̂, α̃)."""
    if not d_bar_norm_sq > 0:
        raise ValueError("adaptive step needs a nonzero direction")
    curvature = (tau * rule.lipschitz + rule.gamma) * d_bar_norm_sq
    alpha_hat = min(delta_l / curvature, rule.alpha_u) * rule.beta
    alpha_tilde = alpha_hat - 4.0 * c_l1 / curvature

    if alpha_hat < 1.0:
        return alpha_hat, StepCase.HAT, alpha_hat, alpha_tilde
    if alpha_tilde <= 1.0:
        return 1.0, StepCase.UNIT, alpha_hat, alpha_tilde
    return alpha_tilde, StepCase.TILDE, alpha_hat, alpha_tilde


def adaptive_step(rule: AdaptiveStep, tau: float, delta_l: float, d_bar_norm_sq: float, c_l1: float) -> float:
    """Step size in (0, α_u·β] approximately minimizing the merit-change upper bound.

    α̂ = min{Δl / ((τL + Γ)‖d̄‖²), α_u}·β and α̃ = α̂ - 4‖c‖₁ / ((τL + Γ)‖d̄‖²);
    the step is α̂ if α̂ < 1, 1 if α̃ ≤ 1 ≤ α̂, and α̃ if α̃ > 1.
    """
    return adaptive_step_with_case(rule, tau, delta_l, d_bar_norm_sq, c_l1)[0]


def merit_change_bound(
    tau: float, lipschitz: float, gamma: float, alpha: float, g: Vector, d: Vector, c: Vector
) -> float:
    """Upper bound on φ(x + αd, τ) - φ(x, τ) when c + J d = 0:

    ατ gᵀd + (|1-α| - 1)‖c‖₁ + ½(τL + Γ)α²‖d‖₂²
    """
    c_l1 = float(np.sum(np.abs(c)))
    return (
        alpha * tau * float(g @ d)
        + (abs(1.0 - alpha) - 1.0) * c_l1
        + 0.5 * (tau * lipschitz + gamma) * alpha**2 * float(d @ d)
    )
