"""
HEURISTIC

A hand-written rule policy for Circle Selection.

Each phase picks one circle, always with the `stay` command:

1. the largest isolated circle, one that touches no unselectable circle and no
   circle already chosen this macro step;
2. otherwise the smallest circle touching a big unselectable circle (radius
   above `big_radius`), which clears that circle at the cost of its own area;
3. otherwise the smallest circle that is smaller than the largest isolated
   circle chosen so far and touches none of the isolated circles chosen so far;
4. otherwise a uniformly random circle.

The rules read only the phase state, so the policy needs no memory between
phases. Ties go to the lowest row.
"""

import logging

import numpy as np

from selectq.constants import COMMANDS, CS_HEURISTIC_BIG_RADIUS
from selectq.envs.circles import CircleSelection
from selectq.errors import ConfigError
from selectq.learner.agents import Agent
from selectq.mdp.phase import PhaseAction

logger = logging.getLogger(__name__)

STAY = COMMANDS.index("stay")
CIRCLE_WIDTH = 3


def touching(a, b):
    """Boolean matrix: circle row a[p] collides with circle row b[q]."""
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[0]), dtype=bool)
    delta = a[:, None, :2] - b[None, :, :2]
    return np.sqrt(np.sum(delta**2, axis=2)) < a[:, None, 2] + b[None, :, 2]


def largest(radius, mask):
    return int(np.argmax(np.where(mask, radius, -np.inf)))


def smallest(radius, mask):
    return int(np.argmin(np.where(mask, radius, np.inf)))


def heuristic_choice(s, rng, big_radius=CS_HEURISTIC_BIG_RADIUS):
    """
    Row of `s.i` the rules pick, with the rule that fired (1 to 4).

    INPUT:
    - `s`          -- a PhaseState of Circle Selection,
    - `rng`        -- SeededRng used by the last rule only,
    - `big_radius` -- unselectable circles above this radius are worth clearing.
    """
    items, context = s.i, s.u.reshape(-1, CIRCLE_WIDTH)
    chosen = s.x[:, :CIRCLE_WIDTH]
    radius = items[:, 2]

    isolated = ~touching(items, context).any(axis=1) & ~touching(items, chosen).any(axis=1)
    if isolated.any():
        return largest(radius, isolated), 1

    clears = touching(items, context[context[:, 2] > big_radius]).any(axis=1)
    if clears.any():
        return smallest(radius, clears), 2

    chosen_isolated = chosen[~touching(chosen, context).any(axis=1)]
    limit = chosen_isolated[:, 2].max() if chosen_isolated.shape[0] else np.inf
    fits = (radius < limit) & ~touching(items, chosen_isolated).any(axis=1)
    if fits.any():
        return smallest(radius, fits), 3

    return int(rng.integers(0, s.n_unselected)), 4


class HeuristicAgent(Agent):
    """Rule policy; it never learns."""

    name = "heuristic"

    def __init__(self, big_radius=CS_HEURISTIC_BIG_RADIUS):
        self.big_radius = big_radius

    def select_action(self, s, eps, rng):
        n, rule = heuristic_choice(s, rng, self.big_radius)
        logger.debug("Phase %d: rule %d picked row %d", s.k, rule, n)
        return PhaseAction(n, STAY)


def make_heuristic_agent(cfg, env, mode, rng):
    if not isinstance(env, CircleSelection):
        raise ConfigError(f"The heuristic plays Circle Selection only, got {type(env).__name__}.")
    return HeuristicAgent()
