"""
TABULAR

Small enumerable Select-MDPs with exact transition and reward tables.

Every item carries an info symbol in range(A). A joint state is the tuple of
the N infos and a joint selection is a set of K (item, command) pairs, stored
sorted by item. Each item evolves independently: its next info is drawn from a
distribution that depends on its own info, its status (unselected, or the
command it received) and the canonical key of the whole configuration, the
sorted multiset of (info, status) pairs. Rewards depend on the canonical key
alone. Relabelling item slots therefore never changes a row of the tables.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from selectq.config import ConfigMixin, require
from selectq.constants import TABULAR_GUARD
from selectq.errors import GuardError
from selectq.matrices.rng import SeededRng
from selectq.mdp.smdp import AbstractSelectMDP

logger = logging.getLogger(__name__)

UNSELECTED = -1


@dataclass(frozen=True)
class TabularConfig(ConfigMixin):
    """Sizes and table seed of a random tabular Select-MDP."""

    N: int = 3
    A: int = 2
    C: int = 1
    K: int = 2
    seed: int = 0

    def __post_init__(self):
        require(1 <= self.K <= self.N, f"Tabular MDP needs 1 <= K <= N, got K={self.K}, N={self.N}.")
        require(self.A >= 1 and self.C >= 1, f"Need A >= 1 and C >= 1, got A={self.A}, C={self.C}.")


def joint_selections(N, K, C):
    """All K-subsets of items with a command each, as sorted pair tuples."""
    return [
        tuple(zip(subset, commands))
        for subset in itertools.combinations(range(N), K)
        for commands in itertools.product(range(C), repeat=K)
    ]


def pair_count(N, A, C, K):
    """Number of (joint state, joint selection) pairs."""
    return A**N * math.comb(N, K) * C**K


def statuses(N, selection):
    status = [UNSELECTED] * N
    for n, c in selection:
        status[n] = c
    return status


def canonical_key(state, selection):
    """Sorted multiset of (info, status) over items."""
    return tuple(sorted(zip(state, statuses(len(state), selection))))


def one_hot_infos(state, A):
    return np.eye(A)[list(state)]


class TabularSMDP(AbstractSelectMDP):
    """
    An enumerated Select-MDP.

    INPUT:
    - `N`, `A`, `C`, `K` -- items, info symbols, commands, selections,
    - `reward_fn`        -- canonical key -> float,
    - `kernel_fn`        -- (canonical key, (info, status)) -> distribution over range(A),
    - `seed`             -- seed of the sampling stream used by `reset` and `step`.
    """

    def __init__(self, N, A, C, K, reward_fn, kernel_fn, seed=0):
        count = pair_count(N, A, C, K)
        if count > TABULAR_GUARD:
            raise GuardError(f"Tabular MDP with N={N}, A={A}, C={C}, K={K} has {count} state-selection pairs (limit {TABULAR_GUARD}).")
        super().__init__(N, K, C, A, 0)
        self.A = A
        self.states = list(itertools.product(range(A), repeat=N))
        self.state_index = {state: idx for idx, state in enumerate(self.states)}
        self.selections = joint_selections(N, K, C)
        self.rewards = {}
        self.kernels = {}
        for state in self.states:
            for selection in self.selections:
                key = canonical_key(state, selection)
                if key in self.rewards:
                    continue
                self.rewards[key] = float(reward_fn(key))
                for pair in sorted(set(key)):
                    p = np.asarray(kernel_fn(key, pair), dtype=np.float64)
                    self.kernels[(key, pair)] = p / p.sum()
        logger.debug("Tabular MDP: %d states, %d selections, %d canonical keys", len(self.states), len(self.selections), len(self.rewards))
        self.rng = SeededRng(seed)
        self.state = None
        self.reset(seed)

    def reward(self, state, selection):
        return self.rewards[canonical_key(state, tuple(sorted(selection)))]

    def item_distributions(self, state, selection):
        selection = tuple(sorted(selection))
        key = canonical_key(state, selection)
        return [self.kernels[(key, pair)] for pair in zip(state, statuses(self.n_items, selection))]

    def next_distribution(self, state, selection):
        """Probability of every joint state in `self.states` order."""
        return reduce(np.multiply.outer, self.item_distributions(state, selection)).reshape(-1)

    def reset(self, seed=None):
        if seed is not None:
            self.rng = SeededRng(seed)
        self.state = tuple(int(a) for a in self.rng.integers(0, self.A, size=self.n_items))
        return self.observe()

    def observe(self):
        return one_hot_infos(self.state, self.A), np.zeros((0, 0))

    def step(self, selection):
        indices, commands = self.check_selection(selection)
        selection = tuple(sorted(zip(indices.tolist(), commands.tolist())))
        reward = self.reward(self.state, selection)
        self.state = tuple(
            int(self.rng.choice(self.A, p=p)) for p in self.item_distributions(self.state, selection)
        )
        items, context = self.observe()
        return reward, items, context


def tabular_random(seed, N, A, C, K):
    """A random symmetric tabular Select-MDP; the same seed gives the same tables."""
    table_rng = SeededRng(seed)

    def reward_fn(key):
        return table_rng.uniform(0.0, 1.0)

    def kernel_fn(key, pair):
        return table_rng.dirichlet(np.ones(A))

    return TabularSMDP(N, A, C, K, reward_fn, kernel_fn, seed=seed)


def tabular_from_config(config):
    return tabular_random(config.seed, config.N, config.A, config.C, config.K)
