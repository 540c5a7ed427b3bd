"""
TEST_OPTIM

Tests for AdamState and adam_step.
"""

import numpy as np
import pytest

from selectq.constants import ADAM_LR
from selectq.errors import NonFiniteError, ShapeError
from selectq.matrices.optim import AdamState, adam_step
from selectq.matrices.rng import SeededRng


class TestAdamState:
    """Tests for the AdamState class."""

    def test_zeros(self):
        """Tests the zero constructor and defaults."""
        state = AdamState.zeros(3)
        assert state.t == 0
        assert state.lr == ADAM_LR
        assert state.beta1 == 0.9
        assert state.beta2 == 0.999
        assert state.eps == 1e-8

    def test_invariants(self):
        """Tests the validation of moments and decay rates."""
        with pytest.raises(ShapeError):
            AdamState(m=np.zeros(2), v=np.zeros(3))
        with pytest.raises(ValueError):
            AdamState.zeros(2, beta1=1.0)
        with pytest.raises(ValueError):
            AdamState(m=np.zeros(2), v=np.zeros(2), t=-1)


class TestAdamStep:
    """Tests for adam_step."""

    def test_zero_gradient(self):
        """Tests that zero gradients leave parameters fixed and advance t."""
        params = np.array([0.3, -1.2, 4.0])
        new, state = adam_step(params, np.zeros(3), AdamState.zeros(3))
        assert np.array_equal(new, params)
        assert state.t == 1

    def test_first_step(self):
        """Tests the bias-corrected first step p = 0, g = 1 -> p ~ -lr."""
        new, _ = adam_step(np.zeros(1), np.ones(1), AdamState.zeros(1))
        assert new[0] == pytest.approx(-ADAM_LR, rel=1e-6)

    def test_quadratic(self):
        """Tests that 1000 steps on p^2 from p = 1 drive |p| below 1e-3."""
        p = np.ones(1)
        state = AdamState.zeros(1, lr=0.01)
        for _ in range(1000):
            p, state = adam_step(p, 2.0 * p, state)
        assert abs(p[0]) < 1e-3

    def test_pure(self):
        """Tests that inputs are not mutated and outputs are bitwise reproducible."""
        rng = SeededRng(2)
        params = rng.normal(size=5)
        grads = rng.normal(size=5)
        state = AdamState.zeros(5)
        snapshot = params.copy()
        a, sa = adam_step(params, grads, state)
        b, sb = adam_step(params, grads, state)
        assert np.array_equal(params, snapshot)
        assert state.t == 0
        assert np.array_equal(a, b)
        assert np.array_equal(sa.m, sb.m) and np.array_equal(sa.v, sb.v)

    def test_nan_gradient(self):
        """Tests that NaN gradients halt with a diagnostic."""
        with pytest.raises(NonFiniteError):
            adam_step(np.zeros(2), np.array([0.0, np.nan]), AdamState.zeros(2))

    def test_length_mismatch(self):
        """Tests mismatched lengths."""
        with pytest.raises(ShapeError):
            adam_step(np.zeros(2), np.zeros(3), AdamState.zeros(2))
