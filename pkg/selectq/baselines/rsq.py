"""
RSQ

Random-select Q-learning. The item of each phase is drawn uniformly among the
unselected rows and only the command is chosen from the Q values of that row.
Targets bootstrap with the value of that behaviour: the mean over items of the
best command value.
"""

import numpy as np

from selectq.learner.agents import QAgent
from selectq.learner.train import shared_kernel
from selectq.mdp.phase import PhaseAction


def rsq_policy(nets, s, rng, eps=0.0):
    """
    A uniform unselected row and the argmax command of that row; with
    probability `eps` the command is uniform too.
    """
    n = int(rng.integers(0, s.n_unselected))
    if eps > 0.0 and rng.random() < eps:
        return PhaseAction(n, int(rng.integers(0, s.n_commands)))
    q = nets.q_values(s.k, s.phase_input)
    return PhaseAction(n, int(np.argmax(q[n])))


class RSQAgent(QAgent):
    """Random item, greedy command."""

    name = "rsq"

    def __init__(self, kernel, K, mode, rng, gamma, lr):
        super().__init__(kernel, K, mode, rng, gamma, lr, bootstrap="row_mean")

    def select_action(self, s, eps, rng):
        return rsq_policy(self.nets, s, rng, eps)


def make_rsq_agent(cfg, env, mode, rng):
    return RSQAgent(shared_kernel(cfg, env), env.n_select, mode, rng, cfg.gamma, cfg.lr)
