"""
VANILLA

Unshared dense Q-networks over the concatenated features of a phase state.

Weights are bound to the item count they were built for and grow with the
square of N. Nothing ties the rows of the output, so a permutation of the
items generally changes every Q value.
"""

from selectq.errors import ConfigError, ShapeError
from selectq.learner.agents import QAgent
from selectq.learner.kernels import DenseKernel
from selectq.learner.sharing import SharingMode
from selectq.nets.groups import GROUP_ORDER
from selectq.nets.projection import dense_forward


def vanilla_forward(dense, s, n_items):
    """QMatrix (N-k, C) of a dense network built for `n_items` items."""
    if s.k + s.n_unselected != n_items:
        raise ShapeError(f"Dense network is bound to N={n_items}, got a state with {s.k + s.n_unselected} items.")
    return dense_forward(dense, s.phase_input, GROUP_ORDER, s.n_commands)


def vanilla_kernel(cfg, env):
    """Dense networks sized for `env` with the depth and width of `cfg`."""
    n_context = env.observe()[1].shape[0] if env.context_width else 0
    return DenseKernel(
        env.n_items,
        env.item_width,
        env.n_commands,
        n_context,
        env.context_width,
        cfg.layers,
        cfg.channels,
        cfg.activation,
    )


def make_vanilla_agent(cfg, env, mode, rng):
    """A QAgent on one dense network per phase."""
    if mode.variant != "I" and env.n_select > 1:
        raise ConfigError(f"Dense networks cannot use {mode.variant} sharing.")
    agent = QAgent(vanilla_kernel(cfg, env), env.n_select, SharingMode("I"), rng, cfg.gamma, cfg.lr)
    agent.name = "vanilla"
    return agent
