"""
PREDATOR_PREY

Selective Predator-Prey.

N predators and U preys live on a G x G integer grid. Each macro step the agent
selects K predators and a move for each; unselected predators stay put. Moves
that would leave the grid become `stay`. A prey is caught when at least
`catch_threshold` selected predators stand in its 8-neighbourhood after the
move; a predator sharing the prey's cell is outside that neighbourhood. The
reward is the number of caught preys. Caught preys respawn at uniform cells,
then every prey takes a uniformly random move (off-grid moves become `stay`).

Predators are the items and preys the context; both are featurized as
(x / G, y / G).
"""

import logging
from dataclasses import dataclass

import numpy as np

from selectq.config import ConfigMixin, require
from selectq.constants import (
    COMMAND_OFFSETS,
    PP_CATCH_THRESHOLD,
    PP_EPISODE_LENGTH,
    PP_GRID,
    PP_PREDATORS,
    PP_PREYS,
)
from selectq.envs.features import featurize_grid
from selectq.matrices.rng import SeededRng
from selectq.mdp.smdp import AbstractSelectMDP

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PPConfig(ConfigMixin):
    """Sizes of Selective Predator-Prey."""

    G: int = PP_GRID
    N: int = PP_PREDATORS
    U: int = PP_PREYS
    K: int = 4
    C: int = 5
    episode_length: int = PP_EPISODE_LENGTH
    catch_threshold: int = PP_CATCH_THRESHOLD

    def __post_init__(self):
        require(self.G >= 2, f"Grid must be at least 2x2, got {self.G}.")
        require(1 <= self.K <= self.N, f"Predator-Prey needs 1 <= K <= N, got K={self.K}, N={self.N}.")
        require(self.U >= 1, f"Predator-Prey needs at least one prey, got {self.U}.")
        require(self.C in (1, 5), f"Predator-Prey has 1 or 5 commands, got {self.C}.")
        require(self.catch_threshold >= 1, f"Catch threshold must be positive, got {self.catch_threshold}.")


def move_on_grid(cells, commands, G):
    """Applies command offsets; a move that leaves the grid is replaced by stay."""
    cells = np.asarray(cells, dtype=np.int64)
    moved = cells + np.array(COMMAND_OFFSETS, dtype=np.int64)[commands]
    inside = np.all((moved >= 0) & (moved < G), axis=1)
    return np.where(inside[:, None], moved, cells)


def caught_preys(predators, preys, threshold):
    """
    Boolean per prey: at least `threshold` predators in its 8-neighbourhood, that
    is at Chebyshev distance exactly one. A predator on the prey's own cell is
    outside the neighbourhood and does not count towards the threshold.
    """
    predators = np.asarray(predators, dtype=np.int64).reshape(-1, 2)
    preys = np.asarray(preys, dtype=np.int64).reshape(-1, 2)
    distance = np.max(np.abs(preys[:, None, :] - predators[None, :, :]), axis=2)
    return (distance == 1).sum(axis=1) >= threshold


class PredatorPrey(AbstractSelectMDP):
    """The Selective Predator-Prey environment."""

    def __init__(self, config, seed=0):
        super().__init__(config.N, config.K, config.C, 2, 2)
        self.config = config
        self.rng = SeededRng(seed)
        self.predators = None
        self.preys = None
        self.reset(seed)

    def _cells(self, n):
        return self.rng.integers(0, self.config.G, size=(n, 2))

    def reset(self, seed=None):
        if seed is not None:
            self.rng = SeededRng(seed)
        self.predators = self._cells(self.config.N)
        self.preys = self._cells(self.config.U)
        return self.observe()

    def observe(self):
        G = self.config.G
        return featurize_grid(self.predators, G), featurize_grid(self.preys, G)

    def step(self, selection):
        indices, commands = self.check_selection(selection)
        G = self.config.G
        predators = self.predators.copy()
        predators[indices] = move_on_grid(predators[indices], commands, G)

        caught = caught_preys(predators[indices], self.preys, self.config.catch_threshold)
        reward = float(caught.sum())

        preys = self.preys.copy()
        preys[caught] = self._cells(int(caught.sum()))
        preys = move_on_grid(preys, self.rng.integers(0, len(COMMAND_OFFSETS), size=preys.shape[0]), G)

        self.predators, self.preys = predators, preys
        logger.debug("Predator-Prey step: %d preys caught", int(reward))
        items, context = self.observe()
        return reward, items, context
