"""
TEST_RNG

Tests for SeededRng.
"""

import numpy as np
import pytest

from selectq.matrices.rng import SeededRng


class TestSeededRng:
    """Tests for the SeededRng class."""

    def test_same_seed(self):
        """Tests that identical seeds give identical draws."""
        a = SeededRng(42)
        b = SeededRng(42)
        assert np.array_equal(a.uniform(size=10), b.uniform(size=10))
        assert np.array_equal(a.integers(0, 100, size=10), b.integers(0, 100, size=10))

    def test_known_stream(self):
        """Tests that the stream is the PCG64 stream numpy documents for the seed."""
        expected = np.random.Generator(np.random.PCG64(np.random.SeedSequence(7))).random(4)
        assert np.array_equal(SeededRng(7).random(4), expected)

    def test_spawn_independent(self):
        """Tests that spawned children differ from each other and are reproducible."""
        c1, c2 = SeededRng(1).spawn(2)
        d1, _ = SeededRng(1).spawn(2)
        assert not np.array_equal(c1.random(5), c2.random(5))
        assert np.array_equal(SeededRng(1).spawn(2)[0].random(5), d1.random(5))

    def test_negative_seed(self):
        """Tests that negative seeds are rejected."""
        with pytest.raises(ValueError):
            SeededRng(-1)

    def test_permutation(self):
        """Tests that permutation is a bijection."""
        perm = SeededRng(0).permutation(6)
        assert sorted(perm.tolist()) == list(range(6))
