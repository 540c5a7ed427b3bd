"""
TEST_EVALUATE

Tests for evaluate, combine_reports and transfer evaluation.
"""

import math

import numpy as np
import pytest

from selectq.baselines.vanilla import make_vanilla_agent
from selectq.constants import EI_TOLERANCE
from selectq.envs.circles import CircleConfig, CircleSelection
from selectq.envs.tabular import tabular_random
from selectq.errors import ConfigError, TransferError
from selectq.harness.evaluate import (
    EvalReport,
    combine_reports,
    ei_deviation,
    evaluate,
    rebuild,
    transfer_evaluate,
    transfer_matrix,
)
from selectq.learner.agents import RandomAgent
from selectq.learner.config import TrainConfig
from selectq.learner.sharing import SharingMode
from selectq.learner.train import make_isq_agent, train
from selectq.matrices.rng import SeededRng
from selectq.matrices.stats import mean_ci95
from selectq.mdp.smdp import AbstractSelectMDP

SMALL = TrainConfig(total_steps=30, minibatch=8, target_period=10, layers=1, channels=4, episode_length=10, eval_interval=30)


class ConstantReward(AbstractSelectMDP):
    """N items of width 2 with random features; every macro step pays `reward`."""

    def __init__(self, N, K=1, reward=1.0):
        super().__init__(N, K, 2, 2)
        self.reward = reward
        self.rng = SeededRng(0)

    def reset(self, seed=None):
        if seed is not None:
            self.rng = SeededRng(seed)
        return self.observe()

    def observe(self):
        return self.rng.uniform(size=(self.n_items, 2)), np.zeros((0, 0))

    def step(self, selection):
        self.check_selection(selection)
        items, context = self.observe()
        return self.reward, items, context


def circles(N=5, K=1, seed=0):
    return CircleSelection(CircleConfig(N=N, U=1, K=K, C=5), seed=seed)


def trained(N=5, K=1, seed=0):
    agent, _ = train(SMALL, circles(N, K), SharingMode("I"), seed)
    return agent


class TestEvaluate:
    """Tests for evaluate."""

    def test_zero_reward(self):
        """Tests that a zero-reward task gives mean 0 and interval 0."""
        report = evaluate(RandomAgent(), ConstantReward(4, reward=0.0), episodes=5, seed=1, episode_length=6)
        assert report.mean == 0.0
        assert report.ci95 == 0.0
        assert report.per_seed_means == (0.0,)
        assert report.radius_histogram is None

    def test_sums_rewards(self):
        """Tests that the episode return is the sum over its macro steps."""
        report = evaluate(RandomAgent(), ConstantReward(4, K=2), episodes=3, seed=0, episode_length=7)
        assert report.mean == 7.0
        assert (report.episode_length, report.episodes) == (7, 3)

    def test_deterministic(self):
        """Tests that a random policy on CS N=5, K=1 gives the same report twice."""
        a = evaluate(RandomAgent(), circles(), episodes=4, seed=3, episode_length=20)
        b = evaluate(RandomAgent(), circles(seed=9), episodes=4, seed=3, episode_length=20)
        assert a == b

    def test_greedy_and_frozen(self):
        """Tests that evaluation neither changes parameters nor depends on the agent's exploration."""
        agent = trained()
        before = [v.copy() for v in agent.nets.param_vectors()]
        a = evaluate(agent, circles(), episodes=2, seed=0, episode_length=15)
        b = evaluate(agent, circles(), episodes=2, seed=0, episode_length=15)
        assert a == b
        assert all(np.array_equal(x, y) for x, y in zip(before, agent.nets.param_vectors()))

    def test_radius_histogram(self):
        """Tests that every selected radius lands in the histogram."""
        report = evaluate(RandomAgent(), circles(N=6, K=2), episodes=2, seed=0, episode_length=10)
        assert sum(report.radius_histogram) == 2 * 10 * 2
        assert report.to_dict()["radius_histogram"]["counts"] == list(report.radius_histogram)

    def test_tabular_has_no_histogram(self):
        """Tests that tasks without radii report no histogram."""
        report = evaluate(RandomAgent(), tabular_random(0, 3, 2, 1, 2), episodes=2, seed=0, episode_length=5)
        assert report.radius_histogram is None

    def test_no_episodes(self):
        """Tests that zero episodes is a ConfigError."""
        with pytest.raises(ConfigError):
            evaluate(RandomAgent(), circles(), episodes=0)


class TestCombineReports:
    """Tests for combine_reports."""

    def test_interval_over_seeds(self):
        """Tests that the combined interval is taken over per-seed means."""
        reports = [EvalReport(m, 0.5, (m,), 10, 4, (1, 2)) for m in (1.0, 2.0, 4.0, 5.0)]
        combined = combine_reports(reports)
        mean, ci95 = mean_ci95([1.0, 2.0, 4.0, 5.0])
        assert combined.mean == mean
        assert combined.ci95 == ci95
        assert combined.per_seed_means == (1.0, 2.0, 4.0, 5.0)
        assert combined.radius_histogram == (4, 8)

    def test_mismatch_and_empty(self):
        """Tests that mixed episode settings or no reports are ConfigErrors."""
        with pytest.raises(ConfigError):
            combine_reports([EvalReport(1.0, 0.0, (1.0,), 10, 4), EvalReport(1.0, 0.0, (1.0,), 11, 4)])
        with pytest.raises(ConfigError):
            combine_reports([])

    def test_missing_histogram(self):
        """Tests that one report without radii drops the histogram."""
        combined = combine_reports([EvalReport(1.0, 0.0, (1.0,), 10, 4, (1,)), EvalReport(2.0, 0.0, (2.0,), 10, 4)])
        assert combined.radius_histogram is None


class TestTransfer:
    """Tests for rebuild, transfer_evaluate and transfer_matrix."""

    def test_same_n_is_evaluate(self):
        """Tests that transfer to the training item count equals plain evaluation."""
        agent = trained()
        direct = evaluate(agent, circles(), episodes=2, seed=5, episode_length=10)
        moved = transfer_evaluate(agent, circles(), episodes=2, seed=5, episode_length=10)
        assert direct == moved

    def test_rebuild_keeps_scalars(self):
        """Tests that rebuilding keeps the parameter count and every scalar."""
        agent = trained()
        moved = rebuild(agent, circles(N=20))
        assert moved.nets.param_count() == agent.nets.param_count()
        assert all(np.array_equal(a, b) for a, b in zip(agent.nets.param_vectors(), moved.nets.param_vectors()))
        assert moved.nets is not agent.nets

    def test_larger_n(self):
        """Tests that networks trained at N=5 evaluate at N=20 and stay equi-invariant."""
        agent = trained()
        env = circles(N=20)
        report = transfer_evaluate(agent, env, episodes=2, seed=0, episode_length=10)
        assert math.isfinite(report.mean)
        assert sum(report.radius_histogram) == 20
        assert ei_deviation(agent, env, seed=0) <= EI_TOLERANCE

    def test_ei_deviation_all_phases(self):
        """Tests the EI deviation check on a three-phase cascade."""
        agent, _ = train(SMALL, circles(N=6, K=3), SharingMode("I"), 0)
        assert ei_deviation(agent, circles(N=9, K=3), seed=1, trials=9) <= EI_TOLERANCE

    def test_dense_refused(self):
        """Tests that dense networks are not transferable."""
        agent = make_vanilla_agent(SMALL, circles(), SharingMode("I"), SeededRng(0))
        with pytest.raises(TransferError):
            transfer_evaluate(agent, circles(N=8), episodes=1, episode_length=2)

    def test_shape_mismatch(self):
        """Tests that a different K or command count is refused."""
        agent = trained()
        with pytest.raises(TransferError):
            rebuild(agent, circles(N=8, K=2))
        with pytest.raises(TransferError):
            rebuild(agent, CircleSelection(CircleConfig(N=8, U=1, K=1, C=1)))

    def test_random_agent(self):
        """Tests that an agent without networks transfers trivially."""
        report = transfer_evaluate(RandomAgent(), ConstantReward(9), episodes=2, episode_length=3)
        assert report.mean == 3.0

    def test_matrix(self):
        """Tests the normalised transfer table on a constant-reward task."""
        cfg = TrainConfig(layers=1, channels=4)
        agents = {n: make_isq_agent(cfg, ConstantReward(n), SharingMode("I"), SeededRng(n)) for n in (3, 6)}
        envs = {n: ConstantReward(n) for n in (3, 6, 12)}
        means, ratios = transfer_matrix(agents, envs, episodes=2, seed=0, episode_length=4)
        assert set(means) == {(a, b) for a in (3, 6) for b in (3, 6, 12)}
        assert all(mean == 4.0 for mean in means.values())
        assert all(ratio == 1.0 for ratio in ratios.values())

    def test_matrix_needs_diagonal(self):
        """Tests that every training item count must be among the test environments."""
        cfg = TrainConfig(layers=1, channels=4)
        agents = {3: make_isq_agent(cfg, ConstantReward(3), SharingMode("I"), SeededRng(0))}
        with pytest.raises(ConfigError):
            transfer_matrix(agents, {6: ConstantReward(6)})
