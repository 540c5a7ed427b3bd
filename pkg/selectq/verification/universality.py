"""
UNIVERSALITY

Fitting an equi-invariant target with a four-layer shared network.

The target has the form

    T(s)_j = H(sum over X of xi_x(x), i_j, sum over I of xi_i(i)),

with fixed random tanh networks H, xi_x and xi_i, so that it is invariant in
the selected items and equivariant in the unselected ones. A shared tanh
network with three phi layers and one psi layer is trained with full-batch Adam
on sampled states and every relabelling of them. The check passes when the
final mean squared error is at most `ratio` times the initial one.
"""

import logging

import numpy as np

from selectq.constants import UNIVERSALITY_RATIO, UNIVERSALITY_STEPS
from selectq.matrices.matrices import Matrix
from selectq.matrices.optim import AdamState, adam_step
from selectq.matrices.rng import SeededRng
from selectq.nets.groups import PhaseInput, group_specs
from selectq.nets.network import backward_batch, build_shared_params, forward_batch
from selectq.nets.projection import DenseNet
from selectq.verification.properties import augment, permutation_group
from selectq.verification.reports import CheckReport

logger = logging.getLogger(__name__)

N, K_SELECTED, C, ITEM_WIDTH = 4, 1, 2, 2
SUMMARY_WIDTH = 3
HIDDEN = 8


def _apply(net, rows):
    out, _ = net.forward(Matrix(data=np.asarray(rows, dtype=np.float64).T))
    return out.data.T


class SummaryTarget:
    """A random smooth target of the form H(sum xi_x(x), i_j, sum xi_i(i))."""

    def __init__(self, rng):
        self.xi_x = DenseNet.initialize(rng, [ITEM_WIDTH + C, HIDDEN, SUMMARY_WIDTH], "tanh")
        self.xi_i = DenseNet.initialize(rng, [ITEM_WIDTH, HIDDEN, SUMMARY_WIDTH], "tanh")
        self.head = DenseNet.initialize(rng, [2 * SUMMARY_WIDTH + ITEM_WIDTH, 2 * HIDDEN, C], "tanh")

    def __call__(self, s):
        selected = _apply(self.xi_x, s.x).sum(axis=0)
        unselected = _apply(self.xi_i, s.i).sum(axis=0)
        rows = [np.concatenate([selected, item, unselected]) for item in s.i]
        return _apply(self.head, rows)


def sample_states(rng, count):
    return [
        PhaseInput.build(
            rng.normal(size=(K_SELECTED, ITEM_WIDTH + C)),
            rng.normal(size=(N - K_SELECTED, ITEM_WIDTH)),
            np.zeros((0, 0)),
            item_width=ITEM_WIDTH,
            n_commands=C,
        )
        for _ in range(count)
    ]


def fit(theta, inputs, targets, steps, ratio, lr=0.01):
    """
    Full-batch Adam on the mean squared error. Returns (fitted theta,
    initial MSE, final MSE); stops once the ratio is reached.
    """
    state = AdamState.zeros(theta.param_count(), lr=lr)
    vector = theta.to_vector()
    initial = final = None
    for step in range(steps + 1):
        q, cache = forward_batch(theta, inputs)
        residual = q - targets
        final = float(np.mean(residual**2))
        if initial is None:
            initial = final
        if final <= ratio * initial or step == steps:
            break
        grad = backward_batch(theta, cache, 2.0 * residual / residual.size)
        vector, state = adam_step(vector, grad, state)
        theta = theta.with_vector(vector)
    logger.debug("Fit stopped after %d steps: MSE %.3g -> %.3g", step, initial, final)
    return theta, initial, final


def check_universality_fit(seed, samples=64, steps=UNIVERSALITY_STEPS, ratio=UNIVERSALITY_RATIO, target="summary", channels=16):
    """
    Fits the shared network to a target and reports final/initial MSE.

    `target` is "summary" (the random invariant target above), "constant" (a
    random constant per command) or "self" (the outputs of the network at its
    own initialisation).
    """
    rng = SeededRng(seed)
    theta = build_shared_params(rng, group_specs(ITEM_WIDTH, C), C, depth=3, channels=channels, activation="tanh")
    states = sample_states(rng, samples)
    if target == "summary":
        function = SummaryTarget(rng)
        values = [function(s) for s in states]
    elif target == "constant":
        constant = rng.normal(size=C)
        values = [np.tile(constant, (N - K_SELECTED, 1)) for _ in states]
    elif target == "self":
        values = [np.zeros((N - K_SELECTED, C)) for _ in states]
    else:
        raise ValueError(f"Unknown target {target!r}; expected summary, constant or self.")
    inputs, targets = augment(states, values, permutation_group(K_SELECTED, N - K_SELECTED, 0, rng))
    if target == "self":
        targets = forward_batch(theta, inputs)[0]
    _, initial, final = fit(theta, inputs, targets, steps, ratio)
    deviation = final / initial if initial > 0.0 else 0.0
    logger.info("Universality fit (%s): MSE ratio %.3g", target, deviation)
    return CheckReport("universal", seed, len(inputs), deviation, ratio, f"target={target}, initial MSE {initial:.4g}, final MSE {final:.4g}")
