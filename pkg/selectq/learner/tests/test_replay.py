"""
TEST_REPLAY

Tests for ReplayChain and ReplayBuffer.
"""

import numpy as np
import pytest

from selectq.errors import ShapeError
from selectq.learner.replay import ReplayBuffer, ReplayChain
from selectq.matrices.rng import SeededRng
from selectq.mdp.phase import PhaseAction, advance, to_phase0


def make_chain(reward):
    s0 = to_phase0(np.eye(3), np.zeros((0, 0)), 2, 1)
    s1 = advance(s0, PhaseAction(2, 0))
    return ReplayChain((s0, s1), (PhaseAction(2, 0), PhaseAction(0, 0)), reward, s0)


class TestReplayChain:
    """Tests for ReplayChain."""

    def test_selection(self):
        """Tests the joint selection recovered from a chain."""
        assert make_chain(1.0).selection == ((2, 0), (0, 0))
        assert make_chain(1.0).K == 2

    def test_phase_order(self):
        """Tests that phases must run 0..K-1."""
        s0 = to_phase0(np.eye(3), np.zeros((0, 0)), 2, 1)
        with pytest.raises(ShapeError):
            ReplayChain((s0, s0), (PhaseAction(0, 0), PhaseAction(0, 0)), 0.0, s0)
        with pytest.raises(ShapeError):
            ReplayChain((s0,), (), 0.0, s0)


class TestReplayBuffer:
    """Tests for ReplayBuffer."""

    def test_capacity(self):
        """Tests FIFO eviction once the capacity is exceeded."""
        buffer = ReplayBuffer(5)
        for r in range(12):
            buffer.push(make_chain(float(r)))
        assert len(buffer) == 5
        assert buffer.insertions == 12
        assert sorted(chain.reward for chain in buffer.chains) == [7.0, 8.0, 9.0, 10.0, 11.0]
        assert [chain.reward for chain in buffer.newest(3)] == [9.0, 10.0, 11.0]

    def test_sample(self):
        """Tests seeded sampling."""
        buffer = ReplayBuffer(10)
        for r in range(4):
            buffer.push(make_chain(float(r)))
        a = [chain.reward for chain in buffer.sample(SeededRng(1), 8)]
        b = [chain.reward for chain in buffer.sample(SeededRng(1), 8)]
        assert a == b and set(a) <= {0.0, 1.0, 2.0, 3.0}
        with pytest.raises(ValueError):
            ReplayBuffer(3).sample(SeededRng(0), 1)
