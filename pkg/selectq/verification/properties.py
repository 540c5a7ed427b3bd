"""
PROPERTIES

Numerical property suites for shared networks.

- `check_ei` -- permuting the items of a phase input permutes the rows of the
  QMatrix and nothing else,
- `check_gradients` -- tied analytic gradients against central differences,
- `check_theorem1_projection` -- on a permutation-augmented squared loss the
  gradient of the tied scalars equals the projection adjoint applied to the
  gradient of the dense network, and directional derivatives along projected
  directions agree,
- `check_loss_invariance` -- the augmented dense loss does not change when a
  dense offset is relabelled by an item permutation.

The EI, projection and loss-invariance suites take `control=True` to run the
same measurement on a dense network with one weight untied, which must fail.
"""

import itertools
import logging
import math

import numpy as np

from selectq.constants import (
    EI_TOLERANCE,
    FINITE_DIFFERENCE_STEP,
    FULL_ENUMERATION_LIMIT,
    GRADIENT_RELATIVE_TOLERANCE,
    SAMPLED_PERMUTATIONS,
    TIED_GRADIENT_TOLERANCE,
)
from selectq.errors import GuardError
from selectq.matrices.rng import SeededRng
from selectq.nets.groups import Permutation, PhaseInput, apply_permutation, group_specs, permute_rows
from selectq.nets.network import backward_batch, build_shared_params, forward_batch, network_backward, network_forward
from selectq.nets.projection import (
    DenseNet,
    dense_forward,
    flatten_inputs,
    permute_dense,
    project_params,
    pull_back_gradient,
)
from selectq.verification.reports import CheckReport

logger = logging.getLogger(__name__)

ITEM_WIDTH = 3
CONTEXT_WIDTH = 2
MAX_SELECTED = 3
MAX_UNSELECTED = 4


def random_theta(rng, n_commands, context, activation="tanh", depth=2, channels=4):
    groups = group_specs(ITEM_WIDTH, n_commands, CONTEXT_WIDTH if context else 0)
    return build_shared_params(rng, groups, n_commands, depth, channels, activation)


def random_input(rng, k, n, m, n_commands):
    return PhaseInput.build(
        rng.normal(size=(k, ITEM_WIDTH + n_commands)),
        rng.normal(size=(n, ITEM_WIDTH)),
        rng.normal(size=(m, CONTEXT_WIDTH)),
        item_width=ITEM_WIDTH,
        n_commands=n_commands,
        context_width=CONTEXT_WIDTH,
    )


def permutation_group(k, n, m, rng):
    """
    Every relabelling of the three groups when each group has at most 4!
    orderings, otherwise `SAMPLED_PERMUTATIONS` random ones.
    """
    if all(math.factorial(size) <= FULL_ENUMERATION_LIMIT for size in (k, n, m)):
        return [
            Permutation(np.array(x, dtype=np.int64), np.array(i, dtype=np.int64), np.array(u, dtype=np.int64))
            for x in itertools.permutations(range(k))
            for i in itertools.permutations(range(n))
            for u in itertools.permutations(range(m))
        ]
    return [Permutation.random(rng, k, n, m) for _ in range(SAMPLED_PERMUTATIONS)]


def augment(states, targets, perms):
    """Every (sigma(s), sigma_i(y)) pair; returns (inputs, stacked targets)."""
    inputs, outputs = [], []
    for s, y in zip(states, targets):
        for sigma in perms:
            inputs.append(apply_permutation(sigma, s))
            outputs.append(permute_rows(sigma.i, y))
    return inputs, np.stack(outputs)


def untie(dense, k, n, n_commands, channels):
    """Copy of `dense` with the first-layer weight from unselected item 1 (or 0) to item 0 shifted by 1."""
    weights = [w.copy() for w in dense.weights]
    row = k * channels
    col = k * (ITEM_WIDTH + n_commands) + min(1, n - 1) * ITEM_WIDTH
    weights[0].data[row, col] += 1.0
    return DenseNet(weights, [b.copy() for b in dense.biases], list(dense.activations))


def dense_loss(dense, theta, inputs, targets):
    """Augmented squared loss of a dense network and its gradient vector."""
    out, cache = dense.forward(flatten_inputs(inputs, theta.gids))
    q = out.data.T.reshape(targets.shape)
    residual = q - targets
    dweights, dbiases, _ = dense.backward(cache, 2.0 * residual.reshape(len(inputs), -1).T)
    return float(np.sum(residual**2)), dweights, dbiases


def _guard(k, n):
    if k > MAX_SELECTED or n > MAX_UNSELECTED:
        raise GuardError(f"Permutation augmentation needs k <= {MAX_SELECTED} and N-k <= {MAX_UNSELECTED}, got k={k}, N-k={n}.")


def check_ei(seed, trials=1000, tol=EI_TOLERANCE, control=False):
    """
    Largest |Q(sigma(s)) - sigma_i(Q(s))| over random networks, inputs and
    relabellings, cycling through k in {0, 1, 2}, N in {4, 8}, C in {1, 5}
    and context sizes {0, 2}.
    """
    rng = SeededRng(seed)
    shapes = list(itertools.product((0, 1, 2), (4, 8), (1, 5), (0, 2)))
    activations = ("relu", "tanh", "softplus")
    deviation = 0.0
    for trial in range(trials):
        k, N, C, m = shapes[trial % len(shapes)]
        theta = random_theta(rng, C, m > 0, activations[trial % len(activations)])
        s = random_input(rng, k, N - k, m, C)
        sigma = Permutation.random(rng, k, N - k, m)
        if control:
            dense = untie(project_params(theta, k, N, m), k, N - k, C, theta.channels)
            q = dense_forward(dense, s, theta.gids, C)
            moved = dense_forward(dense, apply_permutation(sigma, s), theta.gids, C)
        else:
            q = network_forward(theta, s)
            moved = network_forward(theta, apply_permutation(sigma, s))
        deviation = max(deviation, float(np.max(np.abs(moved - permute_rows(sigma.i, q)))))
    logger.info("EI suite: %d trials, max deviation %.3g", trials, deviation)
    return CheckReport("ei" if not control else "ei-control", seed, trials, deviation, tol, expected=not control)


def check_gradients(seed, cases=100, tol=GRADIENT_RELATIVE_TOLERANCE, h=FINITE_DIFFERENCE_STEP):
    """
    Largest |g - fd| / max(|g|, |fd|, 1e-3) over every tied scalar of random
    tanh networks, for L = sum(upstream * Q).
    """
    rng = SeededRng(seed)
    deviation = 0.0
    for case in range(cases):
        C = (1, 3)[case % 2]
        k, n, m = case % 3, 1 + case % 4, case % 3
        theta = random_theta(rng, C, m > 0)
        s = random_input(rng, k, n, m, C)
        upstream = rng.normal(size=(n, C))
        grad = network_backward(theta, s, upstream)
        vector = theta.to_vector()
        for idx in range(vector.size):
            step = np.zeros_like(vector)
            step[idx] = h
            plus = np.sum(upstream * network_forward(theta.with_vector(vector + step), s))
            minus = np.sum(upstream * network_forward(theta.with_vector(vector - step), s))
            fd = (plus - minus) / (2.0 * h)
            deviation = max(deviation, abs(grad[idx] - fd) / max(abs(grad[idx]), abs(fd), 1e-3))
    logger.info("Gradient suite: %d cases, max relative error %.3g", cases, deviation)
    return CheckReport("grad", seed, cases, deviation, tol, f"central differences, h={h}")


def projection_deviation(theta, states, targets, k, N, m, rng, control=False, directions=3):
    """
    Deviation between tied and pulled-back dense gradients of the augmented
    loss, and between directional derivatives along projected directions.
    """
    perms = permutation_group(k, N - k, m, rng)
    inputs, augmented = augment(states, targets, perms)
    q, cache = forward_batch(theta, inputs)
    tied = backward_batch(theta, cache, 2.0 * (q - augmented))
    dense = project_params(theta, k, N, m)
    if control:
        dense = untie(dense, k, N - k, theta.n_commands, theta.channels)
    _, dweights, dbiases = dense_loss(dense, theta, inputs, augmented)
    pulled = pull_back_gradient(theta, dweights, dbiases, k, N, m)
    deviation = float(np.max(np.abs(tied - pulled)))
    dense_grad = dense.gradient_vector(dweights, dbiases)
    for _ in range(directions):
        direction = random_theta(rng, theta.n_commands, "U" in theta.gids, theta.activation, theta.depth, theta.channels)
        along_dense = float(dense_grad @ project_params(direction, k, N, m).to_vector())
        along_tied = float(tied @ direction.to_vector())
        deviation = max(deviation, abs(along_dense - along_tied))
    return deviation, len(perms)


def check_theorem1_projection(seed, cases=50, batch=4, tol=TIED_GRADIENT_TOLERANCE, control=False):
    """
    Tied-versus-dense gradient identity on random cases with k <= 3 and
    N-k <= 4, plus a stationary case per seed: with targets produced by the
    network itself the tied gradient vanishes and so does every directional
    derivative of the dense loss along a projected direction.
    """
    rng = SeededRng(seed)
    deviation = 0.0
    sizes = []
    for case in range(cases):
        k, n, m = case % (MAX_SELECTED + 1), 1 + (case // (MAX_SELECTED + 1)) % MAX_UNSELECTED, case % 2
        _guard(k, n)
        C = (1, 2)[case % 2]
        theta = random_theta(rng, C, m > 0)
        states = [random_input(rng, k, n, m, C) for _ in range(batch)]
        targets = rng.normal(size=(batch, n, C))
        value, count = projection_deviation(theta, states, targets, k, k + n, m, rng, control)
        deviation = max(deviation, value)
        sizes.append(count)
    theta = random_theta(rng, 2, True)
    states = [random_input(rng, 1, 3, 1, 2) for _ in range(batch)]
    realizable = np.stack([network_forward(theta, s) for s in states])
    stationary, _ = projection_deviation(theta, states, realizable, 1, 4, 1, rng, control)
    deviation = max(deviation, stationary)
    name = "theorem1" if not control else "theorem1-control"
    logger.info("Projection suite: %d cases, max deviation %.3g", cases + 1, deviation)
    return CheckReport(
        name, seed, cases + 1, deviation, tol, f"full enumeration, up to {max(sizes)} relabellings per state", not control
    )


def check_loss_invariance(seed, cases=50, samples=20, batch=3, tol=EI_TOLERANCE, control=False):
    """
    Largest absolute change of L(omega(theta) + omega_0) when omega_0 is
    replaced by its relabelling under a random item permutation. With
    `control=True`, omega(theta) itself has one untied weight.
    """
    rng = SeededRng(seed)
    deviation = 0.0
    for case in range(cases):
        k, n, m = case % (MAX_SELECTED + 1), 1 + (case // (MAX_SELECTED + 1)) % MAX_UNSELECTED, (0, 2)[case % 2]
        _guard(k, n)
        C = 2
        N = k + n
        theta = random_theta(rng, C, m > 0)
        states = [random_input(rng, k, n, m, C) for _ in range(batch)]
        inputs, targets = augment(states, rng.normal(size=(batch, n, C)), permutation_group(k, n, m, rng))
        base = project_params(theta, k, N, m)
        if control:
            base = untie(base, k, n, C, theta.channels)
        offset = DenseNet.initialize(rng, [base.in_dim] + [w.nrows for w in base.weights], "tanh")
        reference, _, _ = dense_loss(base.with_vector(base.to_vector() + offset.to_vector()), theta, inputs, targets)
        for _ in range(samples):
            moved = permute_dense(offset, theta, Permutation.random(rng, k, n, m), k, N, m)
            value, _, _ = dense_loss(base.with_vector(base.to_vector() + moved.to_vector()), theta, inputs, targets)
            deviation = max(deviation, abs(value - reference))
    name = "lemma" if not control else "lemma-control"
    logger.info("Loss invariance suite: %d cases, max deviation %.3g", cases, deviation)
    return CheckReport(name, seed, cases * samples, deviation, tol, expected=not control)
