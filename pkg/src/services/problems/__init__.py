"""
Benchmark problems: LIBSVM data, logistic and quadratic objectives, constraints.
"""

from .constraints import (
    Constraint,
    L2BallConstraint,
    LinearConstraint,
    l2ball_constraint,
    make_linear_constraints,
)
from .dataset_service import DatasetService
from .libsvm_parser import load_libsvm, parse_libsvm
from .objectives import (
    FiniteSumObjective,
    LogisticObjective,
    QuadraticObjective,
    logistic_component_gradient,
    logistic_objective,
)
from .problem import Problem, build_logistic_problem, build_problem, estimate_lipschitz

__all__ = [
    "Constraint",
    "DatasetService",
    "FiniteSumObjective",
    "L2BallConstraint",
    "LinearConstraint",
    "LogisticObjective",
    "Problem",
    "QuadraticObjective",
    "build_logistic_problem",
    "build_problem",
    "estimate_lipschitz",
    "l2ball_constraint",
    "load_libsvm",
    "logistic_component_gradient",
    "logistic_objective",
    "make_linear_constraints",
    "parse_libsvm",
]
