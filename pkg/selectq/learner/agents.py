"""
AGENTS

Agents act on IS-MDP phase states and learn from replayed chains.

`QAgent` is the cascaded Q-learning agent: epsilon-greedy over the QMatrix of
its phase, per-phase losses, one Adam step per parameter set. `RandomAgent`
picks uniformly among feasible actions and never learns.
"""

import numpy as np

from selectq.learner.cascade import CascadedQ
from selectq.learner.losses import phase_loss
from selectq.learner.replay import ReplayChain
from selectq.learner.sharing import sharing_groups
from selectq.mdp.phase import PhaseAction, phase_step


def greedy_action(q):
    """Argmax of a QMatrix; ties go to the smallest (row, column)."""
    n, c = divmod(int(np.argmax(q)), q.shape[1])
    return PhaseAction(n, c)


def uniform_action(s, rng):
    n, c = divmod(int(rng.integers(0, s.n_unselected * s.n_commands)), s.n_commands)
    return PhaseAction(n, c)


def select_action(nets, s, eps, rng):
    """Epsilon-greedy action of phase s.k."""
    if rng.random() < eps:
        return uniform_action(s, rng)
    return greedy_action(nets.q_values(s.k, s.phase_input))


class Agent:
    """Common macro-step loop; subclasses provide `select_action` and `update`."""

    name = "agent"

    def begin_macro(self, s):
        """Called with the phase-0 state before the K phases of a macro step."""

    def select_action(self, s, eps, rng):
        raise NotImplementedError

    def update(self, chains):
        return np.zeros(0)

    def on_step(self, step):
        """Called before each training step; returns True when parameters regrouped."""
        return False

    def sync_targets(self):
        pass

    def play_macro(self, env, s, eps, rng):
        """Runs K phases from phase-0 state `s`; returns (chain, next phase-0 state)."""
        self.begin_macro(s)
        states, actions = [], []
        while True:
            a = self.select_action(s, eps, rng)
            states.append(s)
            actions.append(a)
            t = phase_step(env, s, a)
            s = t.s_next
            if t.is_final_phase:
                return ReplayChain(tuple(states), tuple(actions), t.r, s), s


class RandomAgent(Agent):
    """Uniform feasible actions."""

    name = "random"

    def select_action(self, s, eps, rng):
        return uniform_action(s, rng)


class QAgent(Agent):
    """
    Cascaded Q-learning agent.

    INPUT:
    - `kernel`     -- network family of the cascade,
    - `K`          -- phases per macro step,
    - `mode`       -- a SharingMode,
    - `rng`        -- SeededRng for initialisation,
    - `gamma`      -- discount applied at the final phase,
    - `lr`         -- Adam step size,
    - `bootstrap`  -- "max" or "row_mean" (see `phase_loss`).
    """

    name = "isq"

    def __init__(self, kernel, K, mode, rng, gamma, lr, bootstrap="max"):
        self.mode = mode
        self.gamma = gamma
        self.bootstrap = bootstrap
        self.nets = CascadedQ(kernel, K, sharing_groups(mode, 0, K), rng, lr)

    def select_action(self, s, eps, rng):
        return select_action(self.nets, s, eps, rng)

    def losses(self, chains):
        return phase_loss(chains, self.nets, self.gamma, self.bootstrap)

    def update(self, chains):
        losses, grads = self.losses(chains)
        self.nets.apply_gradients(grads)
        return losses

    def on_step(self, step):
        return self.nets.regroup(sharing_groups(self.mode, step, self.nets.K))

    def sync_targets(self):
        self.nets.sync_targets()
