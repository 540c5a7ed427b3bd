"""
TEST_AGENTS

Tests for select_action, RandomAgent and QAgent.
"""

import numpy as np

from selectq.learner.agents import RandomAgent, greedy_action, select_action
from selectq.learner.cascade import CascadedQ
from selectq.learner.kernels import SharedKernel
from selectq.learner.sharing import SharingMode
from selectq.matrices.rng import SeededRng
from selectq.matrices.stats import uniformity_pvalue
from selectq.mdp.phase import PhaseAction, advance, to_phase0
from selectq.nets.groups import Permutation, apply_permutation


class FixedNets:
    """Returns the same QMatrix for every state."""

    def __init__(self, q):
        self.q = np.asarray(q, dtype=np.float64)

    def q_values(self, k, s, target=False):
        return self.q


def state(N=4, K=2, C=5, k=1, seed=0):
    rng = SeededRng(seed)
    s = to_phase0(rng.normal(size=(N, 3)), rng.normal(size=(2, 3)), K, C)
    for _ in range(k):
        s = advance(s, PhaseAction(0, 1))
    return s


class TestSelectAction:
    """Tests for epsilon-greedy selection."""

    def test_uniform_exploration(self):
        """Tests that epsilon=1 is uniform over the (N-k)*C actions."""
        s = state()
        rng = SeededRng(1)
        counts = np.zeros(15)
        for _ in range(10_000):
            a = select_action(FixedNets(np.zeros((3, 5))), s, 1.0, rng)
            counts[a.n * 5 + a.c] += 1
        assert counts.min() > 0
        assert uniformity_pvalue(counts) > 0.001

    def test_greedy(self):
        """Tests that epsilon=0 picks the unique maximum."""
        q = np.zeros((3, 5))
        q[2, 1] = 1.0
        assert select_action(FixedNets(q), state(), 0.0, SeededRng(0)) == PhaseAction(2, 1)

    def test_ties(self):
        """Tests that ties go to the smallest (row, column)."""
        q = np.zeros((3, 2))
        q[1, 1] = q[2, 0] = 1.0
        assert greedy_action(q) == PhaseAction(1, 1)

    def test_permuted_state(self):
        """Tests that the greedy action follows a permutation of the items."""
        s = state(N=5, K=3, C=5, k=1, seed=2)
        kernel = SharedKernel(3, 5, 3, 2, 6)
        nets = CascadedQ(kernel, 3, (0, 1, 2), SeededRng(3), 0.001)
        rng = SeededRng(4)
        a = select_action(nets, s, 0.0, rng)
        sigma = Permutation.random(rng, 1, 4, 2)
        moved = apply_permutation(sigma, s.phase_input)
        q = nets.q_values(1, moved)
        b = greedy_action(q)
        assert sigma.i[b.n] == a.n and b.c == a.c


class TestRandomAgent:
    """Tests for RandomAgent."""

    def test_macro(self):
        """Tests that a macro step produces a complete chain."""
        from selectq.envs.predator_prey import PPConfig, PredatorPrey

        env = PredatorPrey(PPConfig(K=3), seed=0)
        items, context = env.reset(0)
        s = to_phase0(items, context, 3, 5)
        chain, s_next = RandomAgent().play_macro(env, s, 1.0, SeededRng(0))
        assert chain.K == 3 and s_next.k == 0
        assert len({n for n, _ in chain.selection}) == 3
        assert RandomAgent().update([chain]).size == 0


class TestQAgent:
    """Tests for QAgent regrouping."""

    def test_progressive(self):
        """Tests that on_step splits sets on schedule."""
        from selectq.learner.agents import QAgent

        agent = QAgent(SharedKernel(3, 5, 3, 1, 4), 4, SharingMode("P", (5, 10)), SeededRng(0), 0.99, 0.001)
        assert agent.nets.n_sets == 1
        assert not agent.on_step(4)
        assert agent.on_step(5) and agent.nets.n_sets == 2
        assert agent.on_step(10) and agent.nets.n_sets == 4
