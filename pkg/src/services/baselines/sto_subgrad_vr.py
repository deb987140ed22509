"""
Variance-reduced stochastic subgradient method on the merit function
φ(x, τ) = τ f(x) + ‖c(x)‖₁ with τ fixed.

The smooth part's gradient τ∇f is estimated with SVRG; the nonsmooth part
contributes J(x)ᵀ sign(c(x)) with sign(0) = 0. No subproblem is solved:

    x ← x - ᾱ (τ ḡ + J(x)ᵀ sign(c(x))),   ᾱ = α / (τL + Γ)
"""

import logging
import math
from typing import Optional

import numpy as np

from ..errors import SvrSqpError
from ..gradients.estimators import ReferenceGradientCache, full_gradient, svrg_gradient
from ..gradients.sampling import BatchSampler, RandomStreams
from ..models.linalg_data import Vector
from ..models.metrics_data import RunLog
from ..models.solver_data import EvalCounter, StepCase, StepTrace, SubgradSettings
from ..problems.problem import Problem
from ..sqp.iteration import OnStep, RunRecorder, check_run_shape, has_diverged

logger = logging.getLogger(__name__)


def l1_subgradient_signs(c: Vector) -> Vector:
    """Componentwise sign with sign(0) = 0, the minimum-norm subgradient of ‖·‖₁."""
    return np.sign(c)


def run_sto_subgrad_vr(
    problem: Problem,
    settings: SubgradSettings,
    streams: RandomStreams,
    on_step: Optional[OnStep] = None,
    label: str = "sto_subgrad_vr",
) -> RunLog:
    """Run the subgradient method with the same outer/inner structure and budget as SVR-SQP."""
    x = check_run_shape(problem, settings.x_init, settings.batch_size, settings.inner_length, settings.epochs)
    if not settings.tau > 0:
        raise ValueError(f"tau must be positive, got {settings.tau}")
    step_size = settings.step_size
    if not step_size > 0 or not math.isfinite(step_size):
        raise ValueError(f"step size alpha/(tau*L + gamma) must be positive and finite, got {step_size}")

    sampler = BatchSampler(problem.N, settings.batch_size, streams, settings.sampling)
    counter = EvalCounter(problem.N)
    log = RunLog(solver=label)
    recorder = RunRecorder(problem, log, counter)
    tau = settings.tau

    logger.info(
        f"{label}: tau={tau:g}, step={step_size:.4g}, b={settings.batch_size}, "
        f"S={settings.inner_length}, seed={streams.seed}"
    )

    k = s = 0
    try:
        while True:
            x_ref = x.copy()
            g_ref = full_gradient(problem, x_ref, counter)
            reference = ReferenceGradientCache.build(problem, x_ref) if settings.cache_reference_gradients else None

            for s in range(settings.inner_length):
                batch = sampler.draw(k, s)
                g_bar = svrg_gradient(problem, x, x_ref, g_ref, batch, counter, reference)
                c, J = problem.constraint_and_jacobian(x)
                signs = l1_subgradient_signs(c)
                direction = -(tau * g_bar + J.T @ signs)
                x_next = x + step_size * direction

                if on_step is not None:
                    on_step(
                        StepTrace(
                            outer_k=k,
                            inner_s=s,
                            x=x,
                            x_next=x_next,
                            g_bar=g_bar,
                            d=direction,
                            y=signs,
                            c=c,
                            H=None,
                            tau_before=tau,
                            tau=tau,
                            tau_trial=math.inf,
                            alpha=step_size,
                            case=StepCase.SUBGRADIENT,
                        )
                    )

                if has_diverged(x_next):
                    return recorder.stop_diverged(x, k, s)
                x = x_next
                recorder.record(x, tau, step_size, k, s)

                if counter.epochs() >= settings.epochs:
                    return recorder.finish(x)

            k += 1
    except SvrSqpError as e:
        raise e.attach(solver=label, seed=streams.seed, outer_k=k, inner_s=s)
