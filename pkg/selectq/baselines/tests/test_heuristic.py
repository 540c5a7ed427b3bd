"""
TEST_HEURISTIC

Tests for the Circle Selection rule policy.
"""

import numpy as np
import pytest

from selectq.baselines.heuristic import STAY, HeuristicAgent, heuristic_choice, touching
from selectq.baselines.kinds import BaselineKind, make_agent
from selectq.envs.circles import CircleConfig, CircleSelection
from selectq.envs.predator_prey import PPConfig, PredatorPrey
from selectq.errors import ConfigError
from selectq.harness.evaluate import evaluate
from selectq.learner.agents import RandomAgent
from selectq.learner.config import TrainConfig
from selectq.learner.sharing import SharingMode
from selectq.matrices.rng import SeededRng
from selectq.mdp.phase import PhaseAction, advance, to_phase0


def state(items, context, K=1, C=5):
    return to_phase0(np.array(items, dtype=float), np.array(context, dtype=float).reshape(-1, 3), K, C)


class TestTouching:
    """Tests for touching."""

    def test_strict(self):
        """Tests that circles at exactly the sum of their radii do not touch."""
        a = np.array([[0.0, 0.0, 0.1]])
        b = np.array([[0.2, 0.0, 0.1], [0.19, 0.0, 0.1]])
        assert touching(a, b).tolist() == [[False, True]]

    def test_empty(self):
        """Tests the shape against an empty list."""
        assert touching(np.zeros((2, 3)), np.zeros((0, 3))).shape == (2, 0)


class TestHeuristicChoice:
    """Tests for heuristic_choice, one rule at a time."""

    def test_largest_isolated(self):
        """Tests that the largest circle touching nothing is picked."""
        s = state([[0.3, 0.3, 0.05], [0.0, 0.0, 0.1]], [[-0.4, -0.4, 0.02]])
        assert heuristic_choice(s, SeededRng(0)) == (1, 1)

    def test_chosen_circle_breaks_isolation(self):
        """Tests that a circle touching one chosen earlier in the macro step is passed over."""
        s = state([[0.0, 0.0, 0.1], [0.15, 0.0, 0.1], [0.4, 0.4, 0.02]], [[-0.4, 0.4, 0.01]], K=2)
        assert heuristic_choice(s, SeededRng(0)) == (0, 1)
        s = advance(s, PhaseAction(0, STAY))
        assert heuristic_choice(s, SeededRng(0)) == (1, 1)

    def test_clear_big_unselectable(self):
        """Tests that the smallest circle touching a big unselectable circle is sacrificed."""
        s = state([[0.25, 0.1, 0.1], [0.0, 0.0, 0.05]], [[0.2, 0.0, 0.25]])
        assert heuristic_choice(s, SeededRng(0)) == (1, 2)

    def test_small_unselectable_not_cleared(self):
        """Tests that an unselectable circle below the big radius falls through to the later rules."""
        s = state([[0.0, 0.0, 0.05]], [[0.1, 0.0, 0.1]])
        assert heuristic_choice(s, SeededRng(0))[1] == 3

    def test_smaller_than_isolated(self):
        """Tests the rule bounded by the largest isolated circle chosen so far."""
        s = state([[0.4, 0.4, 0.08], [0.1, 0.0, 0.05]], [[0.0, 0.0, 0.1]], K=2)
        assert heuristic_choice(s, SeededRng(0)) == (0, 1)
        s = advance(s, PhaseAction(0, STAY))
        assert heuristic_choice(s, SeededRng(0)) == (0, 3)

    def test_random_fallback(self):
        """Tests the random rule when no other rule applies."""
        s = state([[0.4, 0.4, 0.08], [0.1, 0.0, 0.09]], [[0.0, 0.0, 0.1]], K=2)
        s = advance(s, PhaseAction(0, STAY))
        assert heuristic_choice(s, SeededRng(0)) == (0, 4)

    def test_no_context(self):
        """Tests a task without unselectable circles."""
        env = CircleSelection(CircleConfig(N=4, U=0, K=2), seed=0)
        s = to_phase0(*env.reset(3), 2, 5)
        n, rule = heuristic_choice(s, SeededRng(0))
        assert 0 <= n < 4 and rule in (1, 3, 4)


class TestHeuristicAgent:
    """Tests for HeuristicAgent."""

    def test_stay_commands(self):
        """Tests that every pick of a macro step uses the stay command."""
        env = CircleSelection(CircleConfig(N=6, U=2, K=3), seed=0)
        agent = make_agent(BaselineKind.HEURISTIC, TrainConfig(), env, SharingMode("I"), SeededRng(0))
        assert isinstance(agent, HeuristicAgent)
        chain, _ = agent.play_macro(env, to_phase0(*env.reset(1), 3, 5), 1.0, SeededRng(2))
        assert [a.c for a in chain.actions] == [STAY] * 3

    def test_circle_selection_only(self):
        """Tests that the heuristic refuses Predator-Prey."""
        env = PredatorPrey(PPConfig(G=6, N=4, U=4, K=2), seed=0)
        with pytest.raises(ConfigError):
            make_agent("heuristic", TrainConfig(), env, SharingMode("I"), SeededRng(0))

    @pytest.mark.slow
    def test_beats_random(self):
        """Tests that the rule policy earns more than uniform selection on a small task."""
        env = CircleSelection(CircleConfig(N=5, U=1, K=1), seed=0)
        heuristic = evaluate(HeuristicAgent(), env, 5, 0, 200).mean
        uniform = evaluate(RandomAgent(), env, 5, 0, 200).mean
        assert heuristic > uniform
