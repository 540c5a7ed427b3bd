"""
TEST_LEARNING

Desk-scale learning checks. All of them are slow.
"""

import math

import numpy as np
import pytest

from selectq.baselines.myopic import make_myopic_agent
from selectq.harness.config import build_env, preset
from selectq.harness.evaluate import evaluate
from selectq.learner.agents import RandomAgent
from selectq.learner.config import TrainConfig
from selectq.learner.sharing import SharingMode
from selectq.learner.train import train
from selectq.matrices.rng import SeededRng
from selectq.matrices.stats import standard_error
from selectq.verification.tables import delayed_reward_smdp


@pytest.mark.slow
class TestLearning:
    """Learning runs on the shipped presets and the delayed-reward task."""

    def test_cs_small_beats_random(self):
        """Tests that ISQ-I on cs-small beats the random policy by three standard errors."""
        cfg = preset("cs-small")
        isq, rand = [], []
        for seed in cfg.seeds:
            agent, _ = train(cfg.train, build_env(cfg, seed), cfg.sharing_mode(), seed)
            eval_env = build_env(cfg, seed + 10_000)
            isq.append(evaluate(agent, eval_env, cfg.train.eval_episodes, seed, cfg.episode_length()).mean)
            rand.append(evaluate(RandomAgent(), eval_env, cfg.train.eval_episodes, seed, cfg.episode_length()).mean)
        gap = np.mean(isq) - np.mean(rand)
        assert gap >= 3.0 * math.hypot(standard_error(isq), standard_error(rand))

    def test_delayed_reward_beats_myopic(self):
        """Tests that ISQ is at least as good as the myopic learner when greedy selection is suboptimal."""
        cfg = TrainConfig(
            total_steps=4000,
            gamma=0.9,
            minibatch=32,
            target_period=100,
            layers=1,
            channels=16,
            episode_length=50,
            eval_interval=4000,
        )
        isq, myopic = [], []
        for seed in range(3):
            agent, _ = train(cfg, delayed_reward_smdp(seed), SharingMode("I"), seed)
            isq.append(evaluate(agent, delayed_reward_smdp(seed), 5, seed, 50).mean)
            baseline = make_myopic_agent(cfg, delayed_reward_smdp(seed), SharingMode("I"), SeededRng(seed))
            baseline, _ = train(cfg, delayed_reward_smdp(seed), SharingMode("I"), seed, agent=baseline)
            myopic.append(evaluate(baseline, delayed_reward_smdp(seed), 5, seed, 50).mean)
        assert np.mean(isq) >= np.mean(myopic)

    def test_pp_small_progressive(self):
        """Tests that P sharing on pp-small splits once and trains without NaN."""
        cfg = preset("pp-small")
        for seed in cfg.seeds:
            agent, curve = train(cfg.train, build_env(cfg, seed), cfg.sharing_mode(), seed)
            assert agent.nets.n_sets == 2
            assert all(math.isfinite(row["mean_reward"]) for row in curve)
            assert all(np.all(np.isfinite(v)) for v in agent.nets.param_vectors())
