"""
CONFIG

Training hyperparameters.
"""

from dataclasses import dataclass

from selectq.config import ConfigMixin, require
from selectq.constants import (
    ADAM_LR,
    CHANNELS,
    EPSILON_DECAY_FRACTION,
    EPSILON_FINAL,
    EPSILON_INITIAL,
    EVAL_EPISODES,
    GAMMA,
    LAYERS,
    MINIBATCH,
    REPLAY_CAPACITY,
    SEEDS,
    TARGET_PERIOD,
)
from selectq.nets.layers import ACTIVATIONS


@dataclass(frozen=True)
class TrainConfig(ConfigMixin):
    """
    Hyperparameters of one training run.

    `total_steps` counts macro steps of the wrapped environment; each one is
    followed by one minibatch update once the buffer holds `minibatch` chains.
    The environment is reset every `episode_length` macro steps without a
    terminal cut.
    """

    total_steps: int = 10_000
    gamma: float = GAMMA
    lr: float = ADAM_LR
    minibatch: int = MINIBATCH
    replay_capacity: int = REPLAY_CAPACITY
    target_period: int = TARGET_PERIOD
    eps_initial: float = EPSILON_INITIAL
    eps_final: float = EPSILON_FINAL
    eps_decay_fraction: float = EPSILON_DECAY_FRACTION
    layers: int = LAYERS
    channels: int = CHANNELS
    activation: str = "relu"
    seeds: int = SEEDS
    episode_length: int = 2500
    eval_interval: int = 1000
    eval_episodes: int = EVAL_EPISODES

    def __post_init__(self):
        require(self.total_steps >= 0, f"total_steps must be non-negative, got {self.total_steps}.")
        require(0.0 <= self.gamma <= 1.0, f"gamma must lie in [0, 1], got {self.gamma}.")
        require(self.lr > 0.0, f"lr must be positive, got {self.lr}.")
        for name in ("minibatch", "replay_capacity", "target_period", "seeds", "episode_length", "eval_interval", "eval_episodes", "channels"):
            require(getattr(self, name) >= 1, f"{name} must be positive, got {getattr(self, name)}.")
        require(self.layers >= 0, f"layers must be non-negative, got {self.layers}.")
        require(0.0 <= self.eps_final <= self.eps_initial <= 1.0, "Need 0 <= eps_final <= eps_initial <= 1.")
        require(0.0 <= self.eps_decay_fraction <= 1.0, "eps_decay_fraction must lie in [0, 1].")
        require(self.activation in ACTIVATIONS, f"Unknown activation {self.activation!r}.")


def epsilon(step, cfg):
    """Linear decay from eps_initial to eps_final over the first eps_decay_fraction of steps."""
    window = cfg.eps_decay_fraction * cfg.total_steps
    if window <= 0 or step >= window:
        return cfg.eps_final
    return cfg.eps_initial + (cfg.eps_final - cfg.eps_initial) * step / window
