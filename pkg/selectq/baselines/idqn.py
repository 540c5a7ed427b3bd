"""
IDQN

Independent Q-learning over items.

Every item owns a Q function over the C commands. All items share one network:
the shared network of phase 0 reads the whole state through its pooled terms
and returns one row per item. A macro step ranks the items by their best
command value, keeps the top K and gives each its argmax command. Each selected
item learns from the shared reward,

    (Q(s)[n, c] - (r + gamma * max_c' Q'(s')[n, c']))^2,

with s and s' the phase-0 states before and after the macro step.
"""

import logging

import numpy as np

from selectq.errors import InfeasibleActionError, NonFiniteError
from selectq.learner.agents import Agent
from selectq.learner.cascade import CascadedQ
from selectq.learner.train import shared_kernel
from selectq.mdp.phase import PhaseAction

logger = logging.getLogger(__name__)


def idqn_policy(q, K):
    """
    The top-K items of a QMatrix by best command value, as (row, command)
    pairs in rank order. Ties go to the smaller row, then the smaller command.
    """
    q = np.asarray(q, dtype=np.float64)
    if not 1 <= K <= q.shape[0]:
        raise InfeasibleActionError(f"Cannot select {K} of {q.shape[0]} items.")
    scores = q.max(axis=1)
    ranked = np.argsort(-scores, kind="stable")[:K]
    return [(int(n), int(np.argmax(q[n]))) for n in ranked]


class IDQNAgent(Agent):
    """
    Independent per-item Q-learning with one shared per-item network.

    The plan of a macro step is fixed at phase 0 and replayed one pair per
    phase, so the agent runs on the same phase plumbing as the cascade.
    """

    name = "idqn"

    def __init__(self, kernel, K, rng, gamma, lr):
        self.K = K
        self.gamma = gamma
        self.nets = CascadedQ(kernel, 1, (0,), rng, lr)
        self.plan = []

    def scores(self, s, target=False):
        return self.nets.q_values(0, s.phase_input, target)

    def select_action(self, s, eps, rng):
        if s.k == 0:
            if rng.random() < eps:
                rows = rng.choice(s.n_unselected, size=self.K, replace=False)
                commands = rng.integers(0, s.n_commands, size=self.K)
                pairs = list(zip(rows.tolist(), commands.tolist()))
            else:
                pairs = idqn_policy(self.scores(s), self.K)
            self.plan = [(s.item_ids[n], c) for n, c in pairs]
        item_id, c = self.plan[s.k]
        return PhaseAction(s.item_ids.index(item_id), c)

    def update(self, chains):
        if not isinstance(chains, (list, tuple)):
            chains = [chains]
        kernel = self.nets.kernel
        params = self.nets.main(0)
        q, cache = kernel.forward(params, [chain.states[0].phase_input for chain in chains])
        q_next, _ = kernel.forward(self.nets.target(0), [chain.next_state.phase_input for chain in chains])
        upstream = np.zeros_like(q)
        scale = len(chains) * self.K
        total = 0.0
        for b, chain in enumerate(chains):
            rows = [chain.states[0].item_ids.index(n) for n, _ in chain.selection]
            for n, (_, c) in zip(rows, chain.selection):
                diff = q[b, n, c] - (chain.reward + self.gamma * q_next[b, n].max())
                upstream[b, n, c] += 2.0 * diff / scale
                total += diff**2
        loss = total / scale
        if not np.isfinite(loss):
            logger.error("Non-finite IDQN loss %s", loss)
            raise NonFiniteError(f"IDQN loss is not finite: {loss}.")
        self.nets.apply_gradients({0: kernel.backward(params, cache, upstream)})
        return np.array([loss])

    def sync_targets(self):
        self.nets.sync_targets()


def make_idqn_agent(cfg, env, mode, rng):
    return IDQNAgent(shared_kernel(cfg, env), env.n_select, rng, cfg.gamma, cfg.lr)
