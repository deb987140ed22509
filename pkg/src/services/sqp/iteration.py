"""
One SQP step and the bookkeeping shared by every solver loop.

NO MCP DEPENDENCIES - the SVR-SQP engine and both baselines build on this.
"""

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

from ..errors import DivergedRun, InvariantViolation, RankDeficientJacobian
from ..linalg.kkt_solver import SYMMETRY_TOL, solve_kkt
from ..metrics.metrics_service import evaluate_iterate
from ..models.linalg_data import Matrix, Vector, as_matrix, as_vector
from ..models.metrics_data import IterateRecord, RunLog
from ..models.solver_data import (
    AdaptiveStep,
    ConstantStep,
    EvalCounter,
    MeritState,
    StepCase,
    StepRule,
    StepTrace,
    identity_hessian,
)
from ..problems.problem import Problem
from .merit import (
    adaptive_step_with_case,
    merit_value,
    model_reduction,
    trial_merit_parameter,
    update_merit_parameter,
)

logger = logging.getLogger(__name__)

ZERO_DIRECTION_TOL = 1e-12  # times (1 + ‖ḡ‖∞ + ‖c‖∞)
REDUCTION_ABS_TOL = 1e-10
REDUCTION_REL_TOL = 1e-12
TAU_REL_TOL = 1e-14
DIVERGENCE_BOUND = 1e50  # ‖x‖∞ above this ends the run

OnStep = Callable[[StepTrace], None]


def resolve_hessian(problem: Problem, hessian: Optional[Matrix]) -> Matrix:
    """The fixed H used for every iteration; identity when none is configured."""
    if hessian is None:
        return identity_hessian(problem.n)
    H = as_matrix(hessian, "hessian")
    if H.shape != (problem.n, problem.n):
        raise ValueError(f"hessian must be {problem.n}×{problem.n}, got {H.shape}")
    if not np.allclose(H, H.T, rtol=0.0, atol=SYMMETRY_TOL * max(1.0, float(np.max(np.abs(H))))):
        raise ValueError("hessian must be symmetric")
    return H


def check_run_shape(problem: Problem, x_init: Vector, batch_size: int, inner_length: int, epochs: float) -> Vector:
    """Validate the loop parameters shared by all solvers; returns a private copy of x_init."""
    x = as_vector(x_init, "x_init").copy()
    if x.shape[0] != problem.n:
        raise ValueError(f"x_init has length {x.shape[0]}, problem has n={problem.n}")
    if not 1 <= batch_size <= problem.N:
        raise ValueError(f"batch_size must be in [1, {problem.N}], got {batch_size}")
    if batch_size == problem.N:
        logger.warning(f"batch_size equals N={problem.N}: the run is a deterministic full-gradient method")
    if inner_length < 1:
        raise ValueError(f"inner_length must be at least 1, got {inner_length}")
    if not epochs > 0:
        raise ValueError(f"epochs must be positive, got {epochs}")
    return x


def warn_large_constant_step(step: StepRule) -> None:
    if isinstance(step, ConstantStep) and step.alpha > 1.0:
        logger.warning(f"Constant step alpha={step.alpha} exceeds 1; convergence theory assumes alpha <= 1")


def has_diverged(x: Vector) -> bool:
    """Non-finite or ‖x‖∞ > DIVERGENCE_BOUND."""
    return not np.all(np.isfinite(x)) or float(np.max(np.abs(x), initial=0.0)) > DIVERGENCE_BOUND


def is_zero_direction(d: Vector, g_bar: Vector, c: Vector) -> bool:
    """‖d̄‖∞ ≤ 1e-12·(1 + ‖ḡ‖∞ + ‖c‖∞)"""
    scale = 1.0 + float(np.max(np.abs(g_bar), initial=0.0)) + float(np.max(np.abs(c), initial=0.0))
    return float(np.max(np.abs(d), initial=0.0)) <= ZERO_DIRECTION_TOL * scale


def sqp_step(
    problem: Problem,
    x: Vector,
    g_bar: Vector,
    H: Matrix,
    merit: MeritState,
    step: StepRule,
    outer_k: int,
    inner_s: int,
    check_invariants: bool = True,
) -> Tuple[MeritState, StepTrace]:
    """Solve the SQP subproblem at x with gradient estimate ḡ and take a step.

    Returns:
        (updated merit state, trace); trace.x_next is the new iterate

    Raises:
        RankDeficientJacobian / SingularKkt: From the KKT solve
        DegenerateDirection: From the merit-parameter update
        InvariantViolation: If check_invariants and a step property fails
    """
    c, J = problem.constraint_and_jacobian(x)
    sol = solve_kkt(H, J, g_bar, c)
    d = sol.d

    if is_zero_direction(d, g_bar, c):
        logger.debug(f"Zero direction at ({outer_k}, {inner_s}), iterate unchanged")
        trace = StepTrace(
            outer_k=outer_k,
            inner_s=inner_s,
            x=x,
            x_next=x.copy(),
            g_bar=g_bar,
            d=d,
            y=sol.y,
            c=c,
            H=H,
            tau_before=merit.tau,
            tau=merit.tau,
            tau_trial=math.inf,
            alpha=0.0,
            case=StepCase.ZERO_DIRECTION,
            kkt_solves=1,
        )
        return merit, trace

    tau_trial, q = trial_merit_parameter(g_bar, d, H, c, merit.sigma)
    new_merit = update_merit_parameter(merit, g_bar, d, H, c)
    if new_merit.tau < merit.tau:
        logger.debug(f"tau decreased {merit.tau:.6g} -> {new_merit.tau:.6g} at ({outer_k}, {inner_s})")

    c_l1 = float(np.sum(np.abs(c)))
    delta_l = model_reduction(new_merit.tau, g_bar, d, c)
    d_norm_sq = float(d @ d)

    if isinstance(step, AdaptiveStep):
        alpha, case, alpha_hat, alpha_tilde = adaptive_step_with_case(step, new_merit.tau, delta_l, d_norm_sq, c_l1)
    else:
        alpha, case, alpha_hat, alpha_tilde = step.alpha, StepCase.CONSTANT, math.nan, math.nan

    trace = StepTrace(
        outer_k=outer_k,
        inner_s=inner_s,
        x=x,
        x_next=x + alpha * d,
        g_bar=g_bar,
        d=d,
        y=sol.y,
        c=c,
        H=H,
        tau_before=merit.tau,
        tau=new_merit.tau,
        tau_trial=tau_trial,
        alpha=alpha,
        case=case,
        delta_l=delta_l,
        q=q,
        alpha_hat=alpha_hat,
        alpha_tilde=alpha_tilde,
        kkt_solves=1,
    )
    if check_invariants:
        check_step_invariants(trace, new_merit, step)
    return new_merit, trace


def check_step_invariants(trace: StepTrace, merit: MeritState, step: StepRule) -> None:
    """Assert the guarantees of the merit update and the step rule on one trace.

    Raises:
        InvariantViolation: Carrying the iteration coordinates
    """
    where = {"outer_k": trace.outer_k, "inner_s": trace.inner_s}

    if trace.tau > trace.tau_before:
        raise InvariantViolation(f"tau increased {trace.tau_before} -> {trace.tau}").attach(**where)
    if trace.tau < trace.tau_before:
        expected = (1.0 - merit.eps_tau) * trace.tau_trial
        if abs(trace.tau - expected) > TAU_REL_TOL * expected:
            raise InvariantViolation(f"decreased tau {trace.tau} != (1-eps)·tau_trial {expected}").attach(**where)

    dHd = float(trace.d @ trace.H @ trace.d)
    c_l1 = float(np.sum(np.abs(trace.c)))
    required = trace.tau * max(dHd, 0.0) + merit.sigma * c_l1
    slack = REDUCTION_ABS_TOL + REDUCTION_REL_TOL * (abs(trace.delta_l) + abs(required))
    if trace.delta_l < required - slack:
        message = f"model reduction {trace.delta_l:.6e} below guaranteed {required:.6e}"
        raise InvariantViolation(message).attach(**where)

    if isinstance(step, AdaptiveStep):
        if not 0 < trace.alpha <= step.alpha_u * step.beta:
            message = f"adaptive step {trace.alpha} outside (0, {step.alpha_u * step.beta}]"
            raise InvariantViolation(message).attach(**where)
        if trace.alpha_hat < 1.0:
            expected_case = StepCase.HAT
        elif trace.alpha_tilde <= 1.0:
            expected_case = StepCase.UNIT
        else:
            expected_case = StepCase.TILDE
        if trace.case is not expected_case:
            raise InvariantViolation(f"step case {trace.case.value} != {expected_case.value}").attach(**where)


class RunRecorder:
    """Appends one IterateRecord per inner iteration to a RunLog."""

    def __init__(self, problem: Problem, log: RunLog, counter: EvalCounter):
        self.problem = problem
        self.log = log
        self.counter = counter
        self._warned_rank = False

    def record(self, x: Vector, tau: float, step: float, outer_k: int, inner_s: int) -> IterateRecord:
        try:
            feasibility, stationarity = evaluate_iterate(self.problem, x)
        except RankDeficientJacobian as e:
            feasibility = float(np.max(np.abs(self.problem.constraint(x))))
            stationarity = math.inf
            if not self._warned_rank:
                logger.warning(f"{self.log.solver}: stationarity undefined at ({outer_k}, {inner_s}): {e}")
                self._warned_rank = True
        self.log.metric_evaluations += 1

        record = IterateRecord(
            epoch=self.counter.epochs(),
            outer_k=outer_k,
            inner_s=inner_s,
            feasibility_inf=feasibility,
            stationarity_inf=stationarity,
            merit=merit_value(self.problem, x, tau),
            tau=tau,
            step=step,
        )
        self.log.records.append(record)
        return record

    def stop_diverged(self, x: Vector, outer_k: int, inner_s: int) -> RunLog:
        """End the run at the last recorded iterate; the diverged point is not recorded.

        Raises:
            DivergedRun: If no iterate was recorded before the divergence
        """
        if not self.log.records:
            error = DivergedRun(f"{self.log.solver}: diverged on the first step")
            raise error.attach(outer_k=outer_k, inner_s=inner_s)
        logger.warning(f"{self.log.solver}: iterate diverged at ({outer_k}, {inner_s}), stopping the run")
        self.log.diverged = True
        return self.finish(x)

    def finish(self, x: Vector) -> RunLog:
        self.log.x_final = x
        self.log.component_grad_evals = self.counter.component_grad_evals
        self.log.full_grad_evals = self.counter.full_grad_evals
        logger.info(
            f"{self.log.solver}: {len(self.log)} iterations, {self.counter.epochs():.2f} epochs, "
            f"{self.log.kkt_solves} KKT solves"
        )
        return self.log
