"""
Comparison solvers: mini-batch SQP and the variance-reduced subgradient method.
"""

from .minibatch_sqp import SOLVER_LABEL, minibatch_iterations, run_minibatch_sqp
from .sto_subgrad_vr import l1_subgradient_signs, run_sto_subgrad_vr

__all__ = [
    "SOLVER_LABEL",
    "l1_subgradient_signs",
    "minibatch_iterations",
    "run_minibatch_sqp",
    "run_sto_subgrad_vr",
]
