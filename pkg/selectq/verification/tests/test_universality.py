"""
TEST_UNIVERSALITY

Tests for check_universality_fit.
"""

import numpy as np
import pytest

from selectq.constants import UNIVERSALITY_RATIO
from selectq.matrices.rng import SeededRng
from selectq.nets.groups import Permutation, apply_permutation, permute_rows
from selectq.verification.universality import SummaryTarget, check_universality_fit, sample_states


class TestSummaryTarget:
    """Tests for SummaryTarget."""

    def test_equi_invariant(self):
        """Tests that the target is invariant in X and equivariant in I."""
        rng = SeededRng(0)
        target = SummaryTarget(rng)
        s = sample_states(rng, 1)[0]
        sigma = Permutation.random(rng, 1, 3, 0)
        assert np.allclose(target(apply_permutation(sigma, s)), permute_rows(sigma.i, target(s)), atol=1e-12)


class TestUniversalityFit:
    """Tests for check_universality_fit."""

    def test_realizable(self):
        """Tests that the network's own outputs are fitted at step 0."""
        report = check_universality_fit(0, samples=4, steps=10, target="self")
        assert report.passed and report.max_deviation == 0.0

    def test_constant(self):
        """Tests that a constant target is fitted."""
        assert check_universality_fit(1, samples=8, steps=3000, target="constant").passed

    def test_unknown_target(self):
        """Tests that an unknown target is rejected."""
        with pytest.raises(ValueError):
            check_universality_fit(0, target="noise")

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_summary_target(self, seed):
        """Tests that the random invariant target ends well inside the ratio bound."""
        report = check_universality_fit(seed)
        assert report.passed
        assert report.max_deviation <= UNIVERSALITY_RATIO / 1.5
