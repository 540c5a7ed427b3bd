"""
KINDS

The agents a run can train, and how each one is built.

`ISQ` is the cascaded learner on shared networks. The remaining kinds are the
comparison agents. `HEURISTIC` is a rule policy for Circle Selection;
`ISQ_SINGLE_COMMAND` is the cascaded learner on an environment that exposes a
single command.
"""

import logging
from enum import Enum

from selectq.baselines.eq import make_eq_agent
from selectq.baselines.heuristic import make_heuristic_agent
from selectq.baselines.idqn import make_idqn_agent
from selectq.baselines.myopic import make_myopic_agent
from selectq.baselines.rsq import make_rsq_agent
from selectq.baselines.sorting import SortedItems
from selectq.baselines.vanilla import make_vanilla_agent
from selectq.errors import ConfigError
from selectq.learner.agents import RandomAgent
from selectq.learner.train import make_isq_agent

logger = logging.getLogger(__name__)


class BaselineKind(str, Enum):
    ISQ = "isq"
    VANILLA = "vanilla"
    SORTING = "sorting"
    MYOPIC = "myopic"
    IDQN = "idqn"
    RSQ = "rsq"
    EQ = "eq"
    ISQ_SINGLE_COMMAND = "isq_single"
    RANDOM = "random"
    HEURISTIC = "heuristic"

    @classmethod
    def parse(cls, value):
        try:
            return cls(value)
        except ValueError:
            choices = ", ".join(kind.value for kind in cls)
            raise ConfigError(f"Unknown agent kind {value!r}; expected one of {choices}.") from None

    @property
    def dense(self):
        return self in (BaselineKind.VANILLA, BaselineKind.SORTING)

    @property
    def n_commands(self):
        """Command count forced on the environment, or None."""
        return 1 if self is BaselineKind.ISQ_SINGLE_COMMAND else None


def prepare_env(kind, env):
    """The environment view the agent of `kind` acts on."""
    kind = BaselineKind.parse(kind)
    if kind is BaselineKind.SORTING:
        return SortedItems(env)
    if kind is BaselineKind.ISQ_SINGLE_COMMAND and env.n_commands != 1:
        raise ConfigError(f"A single-command run needs an environment with C=1, got C={env.n_commands}.")
    return env


def make_agent(kind, cfg, env, mode, rng):
    """
    Builds the agent of `kind` for `env` (already passed through `prepare_env`).

    INPUT:
    - `kind` -- a BaselineKind or its value,
    - `cfg`  -- a TrainConfig,
    - `env`  -- the environment,
    - `mode` -- a SharingMode,
    - `rng`  -- SeededRng for initialisation.
    """
    kind = BaselineKind.parse(kind)
    if kind.dense and env.n_select > 1:
        raise ConfigError(f"{kind.value} runs only on K=1 tasks, got K={env.n_select}.")
    if kind in (BaselineKind.ISQ, BaselineKind.ISQ_SINGLE_COMMAND):
        agent = make_isq_agent(cfg, env, mode, rng)
    elif kind.dense:
        agent = make_vanilla_agent(cfg, env, mode, rng)
        agent.name = kind.value
    elif kind is BaselineKind.RANDOM:
        agent = RandomAgent()
    else:
        builders = {
            BaselineKind.MYOPIC: make_myopic_agent,
            BaselineKind.IDQN: make_idqn_agent,
            BaselineKind.RSQ: make_rsq_agent,
            BaselineKind.EQ: make_eq_agent,
            BaselineKind.HEURISTIC: make_heuristic_agent,
        }
        agent = builders[kind](cfg, env, mode, rng)
    logger.debug("Built %s agent for N=%d, K=%d", kind.value, env.n_items, env.n_select)
    return agent
