"""
Seeded randomness for runs: named substreams and mini-batch sampling.

Every random draw in a run comes from a Philox (counter-based, 64-bit)
generator seeded by ``SeedSequence(seed, spawn_key=(stream, *key))``:

    BATCH        key (k, s)   mini-batch of outer iteration k, inner s
    INIT         key ()       initial iterate x₀
    LIPSCHITZ    key ()       probe directions for the L estimate
    CONSTRAINTS  key ()       random A and a₁

Substreams never overlap, so adding draws to one stream leaves the others
unchanged, and each (seed, k, s) batch can be reproduced on its own.
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from ..models.solver_data import SamplingMode


class Stream(IntEnum):
    BATCH = 0
    INIT = 1
    LIPSCHITZ = 2
    CONSTRAINTS = 3


@dataclass(frozen=True)
class RandomStreams:
    """Factory of independent generators for one run seed."""

    seed: int

    def generator(self, stream: Stream, *key: int) -> np.random.Generator:
        seq = np.random.SeedSequence(int(self.seed), spawn_key=(int(stream), *(int(k) for k in key)))
        return np.random.Generator(np.random.Philox(seq))


class BatchSampler:
    """Draws index batches of size b from [N]. Owned by a single run."""

    def __init__(
        self,
        num_components: int,
        batch_size: int,
        streams: RandomStreams,
        mode: SamplingMode = SamplingMode.WITH_REPLACEMENT,
    ):
        if not 1 <= batch_size <= num_components:
            raise ValueError(f"batch_size must be in [1, {num_components}], got {batch_size}")
        self.N = num_components
        self.b = batch_size
        self.streams = streams
        self.mode = SamplingMode(mode)

    def draw(self, outer_k: int, inner_s: int) -> np.ndarray:
        """Batch for iteration (k, s), sorted so reductions run in a fixed order.

        b = N returns every index once in either mode, so full-batch runs are
        deterministic and independent of the seed.
        """
        if self.b == self.N:
            return np.arange(self.N)
        rng = self.streams.generator(Stream.BATCH, outer_k, inner_s)
        if self.mode is SamplingMode.WITHOUT_REPLACEMENT:
            batch = rng.choice(self.N, size=self.b, replace=False)
        else:
            batch = rng.integers(0, self.N, size=self.b)
        return np.sort(batch)
