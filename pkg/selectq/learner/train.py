"""
TRAIN

The training loop.

Each training step plays one macro step (K phases) epsilon-greedily, stores the
chain, and, once the buffer holds a minibatch, performs one update. Targets are
hard-copied every `target_period` steps and progressive sharing splits its sets
at the scheduled steps. A curve point is recorded every `eval_interval` steps,
from `evaluator(agent, step)` when given, else from the rewards of the macro
steps since the previous point.
"""

import logging

from tqdm import tqdm

from selectq.errors import NonFiniteError
from selectq.learner.agents import QAgent
from selectq.learner.config import epsilon
from selectq.learner.kernels import SharedKernel
from selectq.learner.replay import ReplayBuffer
from selectq.matrices.rng import SeededRng
from selectq.matrices.stats import mean_ci95
from selectq.mdp.phase import to_phase0

logger = logging.getLogger(__name__)

SEED_LIMIT = 2**31 - 1


def shared_kernel(cfg, env, local_only=False):
    """Shared networks sized for `env` with the depth and width of `cfg`."""
    return SharedKernel(
        env.item_width,
        env.n_commands,
        env.context_width,
        cfg.layers,
        cfg.channels,
        cfg.activation,
        local_only,
    )


def make_isq_agent(cfg, env, mode, rng, local_only=False, gamma=None, bootstrap="max"):
    """A QAgent on shared networks sized for `env`."""
    kernel = shared_kernel(cfg, env, local_only)
    return QAgent(kernel, env.n_select, mode, rng, cfg.gamma if gamma is None else gamma, cfg.lr, bootstrap)


def reset_env(env, rng):
    items, context = env.reset(int(rng.integers(0, SEED_LIMIT)))
    return to_phase0(items, context, env.n_select, env.n_commands)


def train(cfg, env, mode, seed, agent=None, evaluator=None, progress=False):
    """
    Trains an agent on `env`. Returns (agent, curve) where `agent.nets` is the
    CascadedQ of a Q-learning agent and `curve` is a list of
    {"step", "seed", "mean_reward", "ci95"} rows.
    """
    init_rng, env_rng, explore_rng, replay_rng = SeededRng(seed).spawn(4)
    if agent is None:
        agent = make_isq_agent(cfg, env, mode, init_rng)
    buffer = ReplayBuffer(cfg.replay_capacity)
    s = reset_env(env, env_rng)
    curve = []
    window = []
    logger.info("Training %s for %d steps (seed %d, sharing %s)", agent.name, cfg.total_steps, seed, mode.variant)
    with tqdm(total=cfg.total_steps, disable=not progress, desc=f"seed {seed}") as bar:
        for step in range(cfg.total_steps):
            agent.on_step(step)
            if step and step % cfg.episode_length == 0:
                s = reset_env(env, env_rng)
            chain, s = agent.play_macro(env, s, epsilon(step, cfg), explore_rng)
            buffer.push(chain)
            window.append(chain.reward)
            if len(buffer) >= cfg.minibatch:
                try:
                    agent.update(buffer.sample(replay_rng, cfg.minibatch))
                except NonFiniteError:
                    logger.error("Training aborted at step %d of seed %d: non-finite loss or gradient", step, seed)
                    raise
            if (step + 1) % cfg.target_period == 0:
                agent.sync_targets()
                logger.debug("Targets synchronised at step %d", step + 1)
            if (step + 1) % cfg.eval_interval == 0 or step + 1 == cfg.total_steps:
                if evaluator is not None:
                    mean, ci95 = evaluator(agent, step + 1)
                else:
                    mean, ci95 = mean_ci95(window)
                window = []
                curve.append({"step": step + 1, "seed": seed, "mean_reward": mean, "ci95": ci95})
                logger.info("step %d: mean reward %.4f +- %.4f", step + 1, mean, ci95)
            bar.update(1)
    return agent, curve
