"""
Mini-batch SQP: the SVR-SQP step with variance reduction switched off.

ḡ is the plain mini-batch gradient, there is no reference point and no full
gradient, and each iteration costs b component evaluations. Iterations are
grouped into passes of ⌊N/b⌋ so records carry (pass, position) coordinates.
"""

import logging
import math
from typing import Optional

from ..errors import SvrSqpError
from ..gradients.estimators import minibatch_gradient
from ..gradients.sampling import BatchSampler, RandomStreams
from ..models.metrics_data import RunLog
from ..models.solver_data import EvalCounter, MeritState, SqpSettings, StepCase
from ..problems.problem import Problem
from ..sqp.iteration import (
    OnStep,
    RunRecorder,
    check_run_shape,
    has_diverged,
    resolve_hessian,
    sqp_step,
    warn_large_constant_step,
)

logger = logging.getLogger(__name__)

SOLVER_LABEL = "minibatch_sqp_no_vr"  # variance reduction off; not the safeguarded Sto-SQP


def minibatch_iterations(num_components: int, batch_size: int, epochs: float) -> int:
    """⌊N/b⌋ iterations per pass times the epoch budget, at least one."""
    return max(1, math.floor((num_components // batch_size) * epochs))


def run_minibatch_sqp(
    problem: Problem,
    settings: SqpSettings,
    streams: RandomStreams,
    on_step: Optional[OnStep] = None,
    label: str = SOLVER_LABEL,
) -> RunLog:
    """Mini-batch SQP for ⌊N/b⌋·epochs iterations; settings.inner_length is ignored."""
    x = check_run_shape(problem, settings.x_init, settings.batch_size, 1, settings.epochs)
    H = resolve_hessian(problem, settings.hessian)
    warn_large_constant_step(settings.step)

    sampler = BatchSampler(problem.N, settings.batch_size, streams, settings.sampling)
    counter = EvalCounter(problem.N)
    merit = MeritState(tau=settings.tau_init, sigma=settings.sigma, eps_tau=settings.eps_tau)
    log = RunLog(solver=label)
    recorder = RunRecorder(problem, log, counter)

    per_pass = max(1, problem.N // settings.batch_size)
    total = minibatch_iterations(problem.N, settings.batch_size, settings.epochs)
    logger.info(f"{label}: b={settings.batch_size}, {total} iterations in passes of {per_pass}, seed={streams.seed}")

    k = s = 0
    try:
        for t in range(total):
            k, s = divmod(t, per_pass)
            batch = sampler.draw(k, s)
            g_bar = minibatch_gradient(problem, x, batch, counter)

            merit, trace = sqp_step(
                problem, x, g_bar, H, merit, settings.step, k, s, check_invariants=settings.check_invariants
            )
            log.kkt_solves += trace.kkt_solves
            if trace.case is StepCase.ZERO_DIRECTION:
                log.zero_direction_steps += 1
            if on_step is not None:
                on_step(trace)

            if has_diverged(trace.x_next):
                return recorder.stop_diverged(x, k, s)
            x = trace.x_next
            recorder.record(x, merit.tau, trace.alpha, k, s)
    except SvrSqpError as e:
        raise e.attach(solver=label, seed=streams.seed, outer_k=k, inner_s=s)

    return recorder.finish(x)
