"""
Tests for seeded substreams and mini-batch sampling.
"""

import numpy as np
import pytest

from src.services.gradients.sampling import BatchSampler, RandomStreams, Stream
from src.services.models.solver_data import SamplingMode


@pytest.mark.fast
@pytest.mark.core
class TestRandomStreams:
    """Tests for RandomStreams."""

    def test_same_key_same_draws(self):
        a = RandomStreams(4).generator(Stream.BATCH, 2, 3).random(5)
        b = RandomStreams(4).generator(Stream.BATCH, 2, 3).random(5)
        np.testing.assert_array_equal(a, b)

    def test_streams_are_independent(self):
        """Different streams and keys of one seed give different draws."""
        streams = RandomStreams(0)
        draws = {
            "init": streams.generator(Stream.INIT).random(),
            "lipschitz": streams.generator(Stream.LIPSCHITZ).random(),
            "batch00": streams.generator(Stream.BATCH, 0, 0).random(),
            "batch01": streams.generator(Stream.BATCH, 0, 1).random(),
        }
        assert len(set(draws.values())) == len(draws)

    def test_uses_philox(self):
        gen = RandomStreams(0).generator(Stream.INIT)
        assert isinstance(gen.bit_generator, np.random.Philox)


@pytest.mark.fast
@pytest.mark.core
class TestBatchSampler:
    """Tests for BatchSampler."""

    @pytest.mark.parametrize("mode", list(SamplingMode))
    def test_range_and_length(self, mode):
        sampler = BatchSampler(50, 7, RandomStreams(1), mode)
        for s in range(20):
            batch = sampler.draw(0, s)
            assert len(batch) == 7
            assert batch.min() >= 0 and batch.max() < 50
            assert np.all(np.diff(batch) >= 0)

    def test_reproducible_per_iteration(self):
        """A batch depends only on (seed, k, s), not on earlier draws."""
        fresh = BatchSampler(100, 10, RandomStreams(3)).draw(4, 2)
        used = BatchSampler(100, 10, RandomStreams(3))
        for s in range(5):
            used.draw(0, s)
        np.testing.assert_array_equal(used.draw(4, 2), fresh)

    def test_without_replacement_distinct(self):
        sampler = BatchSampler(30, 30 - 1, RandomStreams(2), SamplingMode.WITHOUT_REPLACEMENT)
        batch = sampler.draw(0, 0)
        assert len(np.unique(batch)) == len(batch)

    @pytest.mark.parametrize("mode", list(SamplingMode))
    def test_full_batch_is_every_index(self, mode):
        """b = N is every index once in either mode, whatever the seed."""
        for seed in (0, 9):
            sampler = BatchSampler(12, 12, RandomStreams(seed), mode)
            np.testing.assert_array_equal(sampler.draw(3, 1), np.arange(12))

    def test_uniform_marginals(self):
        """Each index appears with frequency close to b/N over many draws."""
        sampler = BatchSampler(5, 2, RandomStreams(0))
        counts = np.zeros(5)
        for s in range(4000):
            counts += np.bincount(sampler.draw(0, s), minlength=5)
        np.testing.assert_allclose(counts / counts.sum(), 0.2, atol=0.02)

    @pytest.mark.parametrize("b", [0, 11])
    def test_batch_size_out_of_range(self, b):
        with pytest.raises(ValueError):
            BatchSampler(10, b, RandomStreams(0))
