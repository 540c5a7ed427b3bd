"""
CONFIG

Experiment configuration: one JSON document naming the environment, the agent,
the sharing variant, the training hyperparameters and the seeds.

    {"env": "cs", "env_params": {"N": 5, "K": 1, "U": 1, "C": 1},
     "agent": "isq", "sharing": "I",
     "train": {"total_steps": 200000, "channels": 16},
     "seeds": [0, 1, 2, 3], "out": "results/cs-small", "plot": true}

The evaluation interval and the number of evaluation episodes are the
`eval_interval` and `eval_episodes` fields of `train`. `eval_episode_length`
defaults to the episode length of the environment (2500 macro steps for Circle
Selection, the configured `episode_length` for Predator-Prey, the training
episode length for tabular tasks).
"""

import copy
import hashlib
import json
import logging
from dataclasses import dataclass, field

from selectq.baselines.kinds import BaselineKind, prepare_env
from selectq.config import ConfigMixin, require
from selectq.constants import CS_EPISODE_LENGTH
from selectq.envs.circles import CircleConfig, CircleSelection
from selectq.envs.predator_prey import PPConfig, PredatorPrey
from selectq.envs.tabular import TabularConfig, tabular_from_config
from selectq.errors import ConfigError
from selectq.learner.config import TrainConfig
from selectq.learner.sharing import SharingMode

logger = logging.getLogger(__name__)

ENV_CONFIGS = {"cs": CircleConfig, "pp": PPConfig, "tabular": TabularConfig}


@dataclass(frozen=True)
class ExperimentConfig(ConfigMixin):
    """One experiment; see the module docstring for the JSON layout."""

    nested = {"train": TrainConfig}

    env: str = "cs"
    env_params: dict = field(default_factory=dict)
    agent: str = "isq"
    sharing: str = "I"
    train: TrainConfig = field(default_factory=TrainConfig)
    seeds: tuple = (0, 1, 2, 3)
    eval_episode_length: int = None
    out: str = "results"
    plot: bool = True

    def __post_init__(self):
        require(self.env in ENV_CONFIGS, f"Unknown env {self.env!r}; expected one of {', '.join(ENV_CONFIGS)}.")
        require(isinstance(self.env_params, dict), f"env_params must be an object, got {type(self.env_params).__name__}.")
        require(isinstance(self.train, TrainConfig), "train must be a TrainConfig or an object of its fields.")
        BaselineKind.parse(self.agent)
        SharingMode(self.sharing)
        require(len(self.seeds) >= 1, "At least one seed is required.")
        require(all(isinstance(seed, int) and seed >= 0 for seed in self.seeds), f"Seeds must be non-negative integers, got {self.seeds}.")
        require(len(set(self.seeds)) == len(self.seeds), f"Seeds repeat: {self.seeds}.")
        require(
            self.eval_episode_length is None or self.eval_episode_length >= 1,
            f"eval_episode_length must be positive, got {self.eval_episode_length}.",
        )
        self.env_config()

    def env_config(self):
        """The validated CircleConfig, PPConfig or TabularConfig of this experiment."""
        return ENV_CONFIGS[self.env].from_dict(self.env_params)

    @property
    def kind(self):
        return BaselineKind.parse(self.agent)

    @property
    def n_select(self):
        return self.env_config().K

    def sharing_mode(self):
        return SharingMode.build(self.sharing, self.train.total_steps, self.n_select)

    def episode_length(self):
        """Macro steps per evaluation episode."""
        if self.eval_episode_length is not None:
            return self.eval_episode_length
        if self.env == "cs":
            return CS_EPISODE_LENGTH
        if self.env == "pp":
            return self.env_config().episode_length
        return self.train.episode_length

    def with_env_params(self, **params):
        """A copy whose environment parameters are updated by `params`."""
        return ExperimentConfig.from_dict(dict(self.to_dict(), env_params=dict(self.env_params, **params)))

    def config_hash(self):
        """sha256 of the canonical JSON form."""
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


PRESETS = {
    "cs-small": {
        "env": "cs",
        "env_params": {"N": 5, "K": 1, "U": 1, "C": 1},
        "agent": "isq",
        "sharing": "I",
        "train": {"total_steps": 200_000, "channels": 16, "episode_length": 2500, "eval_interval": 20_000},
        "seeds": [0, 1, 2, 3],
        "out": "results/cs-small",
    },
    "cs-medium": {
        "env": "cs",
        "env_params": {"N": 20, "K": 3, "U": 5, "C": 5},
        "agent": "isq",
        "sharing": "P",
        "train": {"total_steps": 500_000, "channels": 32, "episode_length": 2500, "eval_interval": 50_000},
        "seeds": [0, 1, 2, 3],
        "out": "results/cs-medium",
    },
    "pp-small": {
        "env": "pp",
        "env_params": {"G": 6, "N": 4, "U": 4, "K": 2, "C": 5},
        "agent": "isq",
        "sharing": "P",
        "train": {"total_steps": 100_000, "channels": 32, "episode_length": 175, "eval_interval": 10_000},
        "seeds": [0, 1, 2, 3],
        "out": "results/pp-small",
    },
}


def preset(name):
    if name not in PRESETS:
        raise ConfigError(f"Unknown preset {name!r}; expected one of {', '.join(PRESETS)}.")
    return ExperimentConfig.from_dict(copy.deepcopy(PRESETS[name]))


def load_config(source):
    """An ExperimentConfig from a preset name or a JSON file path."""
    if source in PRESETS:
        return preset(source)
    try:
        with open(source, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"Cannot read config {source}: {exc.strerror}.") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Config {source} is not valid JSON: {exc}.") from exc
    cfg = ExperimentConfig.from_dict(data)
    logger.info("Loaded config %s (hash %s)", source, cfg.config_hash()[:12])
    return cfg


def build_env(cfg, seed=0):
    """The environment of `cfg`, seeded with `seed` and wrapped for its agent kind."""
    env_config = cfg.env_config()
    if cfg.env == "cs":
        env = CircleSelection(env_config, seed)
    elif cfg.env == "pp":
        env = PredatorPrey(env_config, seed)
    else:
        env = tabular_from_config(env_config)
        env.reset(seed)
    return prepare_env(cfg.kind, env)
