"""
Stochastic variance-reduced SQP.

Each outer iteration k fixes a reference point x_ref = x and its full gradient;
each of the S inner iterations samples a batch, forms the SVRG estimate ḡ,
solves the SQP subproblem with fixed H, updates τ̄ and steps with either a
constant or an adaptive step size. The run stops once the evaluation counter
reaches the epoch budget, checked after every inner iteration.

NO MCP DEPENDENCIES - called by the experiment harness.
"""

import logging
from typing import Optional

from ..errors import SvrSqpError
from ..gradients.estimators import ReferenceGradientCache, full_gradient, svrg_gradient
from ..gradients.sampling import BatchSampler, RandomStreams
from ..models.metrics_data import RunLog
from ..models.solver_data import EvalCounter, MeritState, SolverState, SqpSettings, StepCase
from ..problems.problem import Problem
from .iteration import (
    OnStep,
    RunRecorder,
    check_run_shape,
    has_diverged,
    resolve_hessian,
    sqp_step,
    warn_large_constant_step,
)

logger = logging.getLogger(__name__)


def run_svr_sqp(
    problem: Problem,
    settings: SqpSettings,
    streams: RandomStreams,
    on_step: Optional[OnStep] = None,
    label: str = "svr_sqp",
) -> RunLog:
    """Run SVR-SQP until the epoch budget is spent.

    Args:
        problem: Problem oracles
        settings: Step rule, batch size b, inner length S, budget and merit constants
        streams: Random substreams of this run's seed
        on_step: Called with the StepTrace of every inner iteration
        label: Solver name written into the log

    Returns:
        RunLog with one IterateRecord per inner iteration

    Raises:
        RankDeficientJacobian / SingularKkt / DegenerateDirection / InvariantViolation:
            With solver, outer_k and inner_s attached
    """
    x = check_run_shape(problem, settings.x_init, settings.batch_size, settings.inner_length, settings.epochs)
    H = resolve_hessian(problem, settings.hessian)
    warn_large_constant_step(settings.step)

    sampler = BatchSampler(problem.N, settings.batch_size, streams, settings.sampling)
    counter = EvalCounter(problem.N)
    state = SolverState(
        x=x,
        x_ref=x.copy(),
        g_ref=x * 0.0,
        merit=MeritState(tau=settings.tau_init, sigma=settings.sigma, eps_tau=settings.eps_tau),
        counters=counter,
    )
    log = RunLog(solver=label)
    recorder = RunRecorder(problem, log, counter)

    logger.info(
        f"{label}: N={problem.N}, n={problem.n}, m={problem.m}, b={settings.batch_size}, "
        f"S={settings.inner_length}, budget={settings.epochs} epochs, seed={streams.seed}"
    )

    try:
        while True:
            state.inner_s = 0
            state.x_ref = state.x.copy()
            state.g_ref = full_gradient(problem, state.x_ref, counter)
            reference = None
            if settings.cache_reference_gradients:
                reference = ReferenceGradientCache.build(problem, state.x_ref)

            for s in range(settings.inner_length):
                state.inner_s = s
                batch = sampler.draw(state.outer_k, s)
                g_bar = svrg_gradient(problem, state.x, state.x_ref, state.g_ref, batch, counter, reference)

                state.merit, trace = sqp_step(
                    problem,
                    state.x,
                    g_bar,
                    H,
                    state.merit,
                    settings.step,
                    state.outer_k,
                    s,
                    check_invariants=settings.check_invariants,
                )
                log.kkt_solves += trace.kkt_solves
                if trace.case is StepCase.ZERO_DIRECTION:
                    log.zero_direction_steps += 1
                if on_step is not None:
                    on_step(trace)

                if has_diverged(trace.x_next):
                    return recorder.stop_diverged(state.x, state.outer_k, s)
                state.x = trace.x_next
                recorder.record(state.x, state.merit.tau, trace.alpha, state.outer_k, s)

                if counter.epochs() >= settings.epochs:
                    return recorder.finish(state.x)

            state.outer_k += 1
    except SvrSqpError as e:
        raise e.attach(solver=label, seed=streams.seed, outer_k=state.outer_k, inner_s=state.inner_s)
