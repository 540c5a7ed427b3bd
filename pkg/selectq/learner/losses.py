"""
LOSSES

Per-phase squared temporal-difference errors of a cascade.

For a chain (s_0, a_0, ..., s_{K-1}, a_{K-1}, r, s'_0):

    phase k < K-1:  (Q_k(s_k, a_k) - max Q'_{k+1}(s_{k+1}))^2
    phase K-1:      (Q_{K-1}(s_{K-1}, a_{K-1}) - (r + gamma * max Q'_0(s'_0)))^2

Targets come from the target sets; intermediate phases are not discounted.
Losses are averaged over the minibatch and each phase's gradient flows into
the main set serving that phase only. `bootstrap="row_mean"` replaces the max
over all feasible actions by the mean over items of the per-item max, the
value of a policy that picks items uniformly at random.
"""

import logging

import numpy as np

from selectq.errors import NonFiniteError

logger = logging.getLogger(__name__)


def bootstrap_values(q, how="max"):
    """Per-sample value of a batch of QMatrices (B, n, C)."""
    if how == "max":
        return q.reshape(q.shape[0], -1).max(axis=1)
    if how == "row_mean":
        return q.max(axis=2).mean(axis=1)
    raise ValueError(f"Unknown bootstrap {how!r}.")


def phase_targets(chains, cascade, gamma, k, bootstrap="max"):
    """TD targets of phase k for every chain."""
    K = cascade.K
    if k < K - 1:
        following = [chain.states[k + 1].phase_input for chain in chains]
        q_next, _ = cascade.kernel.forward(cascade.target(k + 1), following)
        return bootstrap_values(q_next, bootstrap)
    following = [chain.next_state.phase_input for chain in chains]
    q_next, _ = cascade.kernel.forward(cascade.target(0), following)
    rewards = np.array([chain.reward for chain in chains], dtype=np.float64)
    return rewards + gamma * bootstrap_values(q_next, bootstrap)


def phase_loss(chains, cascade, gamma, bootstrap="max"):
    """
    Returns (losses, grads): the K minibatch-mean squared errors and, per set
    index, the gradient of the sum of the losses of the phases it serves.
    """
    if not isinstance(chains, (list, tuple)):
        chains = [chains]
    B = len(chains)
    losses = np.zeros(cascade.K)
    grads = cascade.zero_grads()
    rows = np.arange(B)
    for k in range(cascade.K):
        params = cascade.main(k)
        inputs = [chain.states[k].phase_input for chain in chains]
        q, cache = cascade.kernel.forward(params, inputs)
        n = np.array([chain.actions[k].n for chain in chains])
        c = np.array([chain.actions[k].c for chain in chains])
        diff = q[rows, n, c] - phase_targets(chains, cascade, gamma, k, bootstrap)
        losses[k] = np.mean(diff**2)
        upstream = np.zeros_like(q)
        upstream[rows, n, c] = 2.0 * diff / B
        grads[cascade.phase_map[k]] += cascade.kernel.backward(params, cache, upstream)
    if not np.all(np.isfinite(losses)):
        logger.error("Non-finite phase losses %s", losses.tolist())
        raise NonFiniteError(f"Phase losses are not finite: {losses.tolist()}.")
    return losses, grads
