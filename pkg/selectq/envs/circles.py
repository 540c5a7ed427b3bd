"""
CIRCLES

Circle Selection.

N selectable and U unselectable circles live in the square [-0.5, 0.5]^2. Each
macro step the agent selects K selectable circles and a move command for each.
The step then runs in order:

1. every selected circle moves `move_distance` in its command's direction,
2. the reward is computed on the moved configuration,
3. selected circles, and unselectable circles touching any of them, are
   replaced by fresh circles of radius `init_radius` at uniform positions,
4. all other circles grow by U[growth] (capped at `max_radius`) and jitter by
   U[-jitter, jitter]^2.

Positions are clamped to the square after every move. Two circles collide
when the distance between their centres is strictly less than the sum of
their radii.
"""

import logging
from dataclasses import dataclass

import numpy as np

from selectq.config import ConfigMixin, require
from selectq.constants import (
    COMMAND_OFFSETS,
    CS_GROWTH,
    CS_HALF_WIDTH,
    CS_INIT_RADIUS,
    CS_JITTER,
    CS_MAX_RADIUS,
    CS_MOVE_DISTANCE,
)
from selectq.envs.features import featurize_circles
from selectq.errors import InfeasibleActionError
from selectq.matrices.rng import SeededRng
from selectq.mdp.smdp import AbstractSelectMDP

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CircleConfig(ConfigMixin):
    """Sizes and dynamics constants of Circle Selection."""

    N: int = 5
    U: int = 1
    K: int = 1
    C: int = 5
    move_distance: float = CS_MOVE_DISTANCE
    init_radius: float = CS_INIT_RADIUS
    growth: tuple = CS_GROWTH
    jitter: float = CS_JITTER
    max_radius: float = CS_MAX_RADIUS

    def __post_init__(self):
        require(1 <= self.K <= self.N, f"Circle Selection needs 1 <= K <= N, got K={self.K}, N={self.N}.")
        require(self.U >= 0, f"U must be non-negative, got {self.U}.")
        require(self.C in (1, 5), f"Circle Selection has 1 or 5 commands, got {self.C}.")
        require(0.0 < self.init_radius <= self.max_radius, "Need 0 < init_radius <= max_radius.")
        require(len(self.growth) == 2 and 0.0 <= self.growth[0] <= self.growth[1], f"Bad growth range {self.growth}.")
        require(self.move_distance >= 0.0 and self.jitter >= 0.0, "Move distance and jitter must be non-negative.")


@dataclass(frozen=True)
class Circle:
    """One circle as seen from outside the environment."""

    pos_x: float
    pos_y: float
    radius: float
    selectable: bool


def circle_area(radius):
    return np.pi * np.asarray(radius, dtype=np.float64) ** 2


def collisions(positions, radii, a, b):
    """Boolean matrix: circle a[p] collides with circle b[q]."""
    delta = positions[a][:, None, :] - positions[b][None, :, :]
    distance = np.sqrt(np.sum(delta**2, axis=2))
    return distance < radii[a][:, None] + radii[b][None, :]


def cs_reward(positions, radii, n_selectable, selected):
    """
    Sum over selected circles of -area (touches an unselectable circle), 0
    (touches only other selected circles) or +area (touches neither), in that
    order of precedence.

    INPUT:
    - `positions`    -- (N + U, 2) post-move centres,
    - `radii`        -- (N + U,) radii,
    - `n_selectable` -- N; circles N.. are unselectable,
    - `selected`     -- distinct indices in range(N).
    """
    positions = np.asarray(positions, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    selected = np.asarray(selected, dtype=np.int64)
    if len(set(selected.tolist())) != selected.size:
        raise InfeasibleActionError(f"Selection repeats a circle: {selected.tolist()}.")
    if np.any(selected < 0) or np.any(selected >= n_selectable):
        raise InfeasibleActionError(f"Selected circles must lie in range(0, {n_selectable}): {selected.tolist()}.")
    unselectable = np.arange(n_selectable, radii.shape[0])
    hits_unselectable = collisions(positions, radii, selected, unselectable).any(axis=1)
    among = collisions(positions, radii, selected, selected)
    np.fill_diagonal(among, False)
    hits_selected = among.any(axis=1)
    area = circle_area(radii[selected])
    values = np.where(hits_unselectable, -area, np.where(hits_selected, 0.0, area))
    return float(values.sum())


class CircleSelection(AbstractSelectMDP):
    """
    The Circle Selection environment. Items are the N selectable circles with
    features (pos_x, pos_y, radius); the U unselectable circles are context.
    """

    def __init__(self, config, seed=0):
        super().__init__(config.N, config.K, config.C, 3, 3 if config.U else 0)
        self.config = config
        self.rng = SeededRng(seed)
        self.positions = None
        self.radii = None
        self.last_selected_radii = np.zeros(0)
        self.reset(seed)

    def _fresh(self, n):
        positions = self.rng.uniform(-CS_HALF_WIDTH, CS_HALF_WIDTH, size=(n, 2))
        return positions, np.full(n, self.config.init_radius)

    def reset(self, seed=None):
        if seed is not None:
            self.rng = SeededRng(seed)
        total = self.config.N + self.config.U
        self.positions = self.rng.uniform(-CS_HALF_WIDTH, CS_HALF_WIDTH, size=(total, 2))
        self.radii = self.rng.uniform(self.config.init_radius, self.config.max_radius, size=total)
        return self.observe()

    def observe(self):
        features = featurize_circles(self.positions, self.radii)
        return features[: self.config.N].copy(), features[self.config.N :].copy()

    def circles(self):
        return [
            Circle(float(x), float(y), float(r), n < self.config.N)
            for n, ((x, y), r) in enumerate(zip(self.positions, self.radii))
        ]

    def step(self, selection):
        indices, commands = self.check_selection(selection)
        config = self.config

        offsets = np.array(COMMAND_OFFSETS, dtype=np.float64)[commands]
        positions = self.positions.copy()
        positions[indices] = np.clip(
            positions[indices] + config.move_distance * offsets, -CS_HALF_WIDTH, CS_HALF_WIDTH
        )
        reward = cs_reward(positions, self.radii, config.N, indices)
        self.last_selected_radii = self.radii[indices].copy()

        unselectable = np.arange(config.N, config.N + config.U)
        touched = collisions(positions, self.radii, unselectable, indices).any(axis=1)
        replaced = np.concatenate([indices, unselectable[touched]])
        keep = np.ones(positions.shape[0], dtype=bool)
        keep[replaced] = False

        radii = self.radii.copy()
        new_positions, new_radii = self._fresh(replaced.size)
        positions[replaced] = new_positions
        radii[replaced] = new_radii
        n_keep = int(keep.sum())
        radii[keep] = np.minimum(radii[keep] + self.rng.uniform(*config.growth, size=n_keep), config.max_radius)
        jitter = self.rng.uniform(-config.jitter, config.jitter, size=(n_keep, 2))
        positions[keep] = np.clip(positions[keep] + jitter, -CS_HALF_WIDTH, CS_HALF_WIDTH)

        self.positions, self.radii = positions, radii
        logger.debug("Circle step: reward %.4f, %d circles replaced", reward, replaced.size)
        items, context = self.observe()
        return reward, items, context
