"""
SOLVERS

Exact values of a TabularMDP.

`value_iteration` sweeps the Bellman optimality operator until the sup-norm
change of Q drops below the tolerance. `finite_horizon_values` is the
backward-induction oracle over a fixed number of transitions, and
`policy_evaluation` values a fixed deterministic policy.
"""

import logging
from dataclasses import dataclass

import numpy as np

from selectq.errors import NonFiniteError

logger = logging.getLogger(__name__)

MAX_SWEEPS = 1_000_000


@dataclass(eq=False)
class QTable:
    """Action values (S, A) with -inf on infeasible actions."""

    q: np.ndarray
    gamma: float
    residual: float
    mdp: object

    def values(self):
        return self.q.max(axis=1)

    def greedy(self):
        """Index of the first maximising action per state."""
        return self.q.argmax(axis=1)

    def value(self, label):
        return float(self.values()[self.mdp.state_index[label]])

    def optimal_actions(self, label, gap=1e-9):
        """Actions within `gap` of the best at state `label`."""
        row = self.q[self.mdp.state_index[label]]
        return [self.mdp.actions[a] for a in np.flatnonzero(row >= row.max() - gap)]


def _backup(mdp, gamma, v):
    q = mdp.rewards + mdp.discounts(gamma) * (mdp.transitions @ v)
    return np.where(mdp.feasible, q, -np.inf)


def value_iteration(mdp, gamma, tol=1e-12):
    """
    Optimal action values of `mdp`.

    INPUT:
    - `mdp`   -- a TabularMDP,
    - `gamma` -- discount in [0, 1),
    - `tol`   -- bound on the sup-norm change of the last sweep.
    """
    if tol <= 0.0:
        raise ValueError(f"Tolerance must be positive, got {tol}.")
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"Value iteration needs 0 <= gamma < 1, got {gamma}.")
    q = _backup(mdp, gamma, np.zeros(mdp.n_states))
    for sweep in range(MAX_SWEEPS):
        following = _backup(mdp, gamma, q.max(axis=1))
        residual = float(np.max(np.abs(following[mdp.feasible] - q[mdp.feasible])))
        q = following
        if not np.isfinite(residual):
            raise NonFiniteError(f"Value iteration diverged at sweep {sweep}.")
        if residual <= tol:
            logger.debug("Value iteration converged after %d sweeps (residual %.3g)", sweep + 1, residual)
            return QTable(q, gamma, residual, mdp)
    raise NonFiniteError(f"Value iteration did not reach residual {tol} in {MAX_SWEEPS} sweeps.")


def finite_horizon_values(mdp, gamma, horizon):
    """Optimal Q over `horizon` transitions by backward induction."""
    v = np.zeros(mdp.n_states)
    q = np.where(mdp.feasible, 0.0, -np.inf)
    for _ in range(horizon):
        q = _backup(mdp, gamma, v)
        v = q.max(axis=1)
    return q


def policy_evaluation(mdp, policy, gamma):
    """
    State values of the deterministic `policy` (an action index per state),
    from the linear system (1 - gamma P_pi) v = r_pi with per-transition discounts.
    """
    rows = np.arange(mdp.n_states)
    policy = np.asarray(policy, dtype=np.int64)
    if not mdp.feasible[rows, policy].all():
        raise ValueError("Policy picks an infeasible action.")
    system = np.eye(mdp.n_states) - mdp.discounts(gamma)[rows, policy][:, None] * mdp.transitions[rows, policy]
    return np.linalg.solve(system, mdp.rewards[rows, policy])
