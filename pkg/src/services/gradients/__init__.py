"""
Gradient estimators and seeded mini-batch sampling.
"""

from .estimators import ReferenceGradientCache, full_gradient, minibatch_gradient, svrg_gradient
from .sampling import BatchSampler, RandomStreams, Stream

__all__ = [
    "BatchSampler",
    "RandomStreams",
    "ReferenceGradientCache",
    "Stream",
    "full_gradient",
    "minibatch_gradient",
    "svrg_gradient",
]
