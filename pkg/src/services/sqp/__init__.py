"""
SVR-SQP: merit function, merit-parameter update, step rules and the solver loop.
"""

from .iteration import RunRecorder, check_step_invariants, is_zero_direction, resolve_hessian, sqp_step
from .merit import (
    TAU_TRIAL_INFINITE,
    adaptive_step,
    adaptive_step_with_case,
    local_model,
    merit_change_bound,
    merit_value,
    model_reduction,
    trial_merit_parameter,
    update_merit_parameter,
)
from .svr_sqp_service import run_svr_sqp

__all__ = [
    "RunRecorder",
    "TAU_TRIAL_INFINITE",
    "adaptive_step",
    "adaptive_step_with_case",
    "check_step_invariants",
    "is_zero_direction",
    "local_model",
    "merit_change_bound",
    "merit_value",
    "model_reduction",
    "resolve_hessian",
    "run_svr_sqp",
    "sqp_step",
    "trial_merit_parameter",
    "update_merit_parameter",
]
