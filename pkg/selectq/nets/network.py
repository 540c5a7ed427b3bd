"""
NETWORK

Equi-invariant Q-networks: D shared `phi` layers followed by one linear `psi`
layer that emits C command values for every unselected item,

    Q_k(s; theta) = psi(phi(...phi(s))).

The same `SharedParams` evaluates any phase k, any item count N and any
context size, since mean pooling makes every scalar shape-agnostic. A network
with `local_only=True` keeps all pooled (cross) weights at zero, so each row
depends on its own item alone.
"""

from dataclasses import dataclass, field

import numpy as np

from selectq.errors import ShapeError
from selectq.nets.groups import GROUP_ORDER, GroupSpec, stack_inputs
from selectq.nets.layers import (
    ACTIVATIONS,
    SharedLayerParams,
    layer_backward,
    layer_pre_activation,
)


@dataclass(eq=False)
class SharedParams:
    """
    Parameters theta_k of one cascaded network.

    - `layers`     -- D phi layers then one psi layer,
    - `groups`     -- tuple of GroupSpec (input widths of the first layer),
    - `activation` -- relu, tanh, softplus or identity (phi layers only),
    - `local_only` -- pooled weights are held at zero.
    """

    layers: list
    groups: tuple
    activation: str = "relu"
    local_only: bool = False
    _sizes: list = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if not self.layers:
            raise ShapeError("A shared network needs at least one layer.")
        if self.activation not in ACTIVATIONS:
            raise ShapeError(f"Unknown activation {self.activation!r}.")
        widths = {spec.gid: spec.width for spec in self.groups}
        for depth, layer in enumerate(self.layers):
            if layer.in_widths != {g: widths[g] for g in GROUP_ORDER if g in widths}:
                raise ShapeError(
                    f"Layer {depth} expects input widths {layer.in_widths}, previous layer gives {widths}."
                )
            widths = {g: layer.out_width for g in layer.out_groups}
        last = self.layers[-1]
        if last.kind != "psi" or last.out_groups != ("I",):
            raise ShapeError("The last layer must be a psi layer emitting only group I.")
        self._sizes = [layer.param_count() for layer in self.layers]

    @property
    def depth(self):
        """D, the number of phi layers."""
        return len(self.layers) - 1

    @property
    def n_commands(self):
        return self.layers[-1].out_width

    @property
    def channels(self):
        return self.layers[0].out_width if self.depth else self.n_commands

    @property
    def gids(self):
        return tuple(spec.gid for spec in self.groups)

    def param_count(self):
        return int(sum(self._sizes))

    def to_vector(self):
        return np.concatenate([layer.to_vector() for layer in self.layers])

    def with_vector(self, vector):
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (self.param_count(),):
            raise ShapeError(f"Network expects {self.param_count()} scalars, got {vector.shape}.")
        layers = []
        offset = 0
        for layer, size in zip(self.layers, self._sizes):
            layers.append(layer.with_vector(vector[offset : offset + size]))
            offset += size
        return SharedParams(layers, self.groups, self.activation, self.local_only)

    def copy(self):
        return self.with_vector(self.to_vector())

    def pooled_mask(self):
        """1.0 on scalars that may train, 0.0 on pooled scalars of a local-only network."""
        masks = []
        for layer in self.layers:
            for name, _, block in layer.blocks():
                keep = 0.0 if (self.local_only and name == "cross") else 1.0
                masks.append(np.full(block.size, keep))
        return np.concatenate(masks)


def build_shared_params(rng, groups, n_commands, depth=3, channels=48, activation="relu", local_only=False):
    """
    Initializes a network: `depth` phi layers of width `channels`, then psi.
    """
    if depth < 0:
        raise ShapeError(f"Depth must be non-negative, got {depth}.")
    if n_commands < 1 or channels < 1:
        raise ShapeError(f"Need n_commands >= 1 and channels >= 1, got {n_commands}, {channels}.")
    groups = tuple(sorted(groups, key=lambda spec: GROUP_ORDER.index(spec.gid)))
    if "I" not in {spec.gid for spec in groups}:
        raise ShapeError("A phase network needs the unselected group I.")
    widths = {spec.gid: spec.width for spec in groups}
    layers = []
    for _ in range(depth):
        layers.append(SharedLayerParams.initialize(rng, widths, tuple(widths), channels, "phi"))
        widths = {g: channels for g in widths}
    layers.append(SharedLayerParams.initialize(rng, widths, ("I",), n_commands, "psi"))
    theta = SharedParams(layers, groups, activation, local_only)
    if local_only:
        theta = theta.with_vector(theta.to_vector() * theta.pooled_mask())
    return theta


def param_count(theta):
    """Exact number of tied scalars; independent of k, N and |U|."""
    return theta.param_count()


def _input_batch(theta, inputs):
    if isinstance(inputs, dict):
        batch = inputs
        counts = {g: batch[g].shape[1] for g in batch}
    else:
        inputs = list(inputs)
        batch = stack_inputs(inputs, theta.gids)
        counts = {g: max(s.groups()[g].shape[0] for s in inputs) for g in ("X", "U")}
    for g in ("X", "U"):
        if g not in theta.gids and counts.get(g, 0) > 0:
            raise ShapeError(f"Network has no group {g} but the state carries {counts[g]} such items.")
    if batch["I"].shape[1] == 0:
        raise ShapeError("Group I is empty: no feasible action.")
    widths = {spec.gid: spec.width for spec in theta.groups}
    out = {}
    for g in theta.gids:
        a = np.asarray(batch[g], dtype=np.float64)
        if a.shape[1] == 0:
            a = np.zeros((a.shape[0], 0, widths[g]))
        elif a.shape[2] != widths[g]:
            raise ShapeError(f"Group {g} has width {a.shape[2]}, network expects {widths[g]}.")
        out[g] = a
    return out


def forward_batch(theta, inputs):
    """
    Batched forward pass. `inputs` is a list of PhaseInputs of equal shape or
    a {gid: (B, n_g, P_g)} dict. Returns (Q of shape (B, N-k, C), cache).
    """
    batch = _input_batch(theta, inputs)
    rho, _ = ACTIVATIONS[theta.activation]
    cache = []
    h = batch
    for layer in theta.layers:
        pre, pooled = layer_pre_activation(layer, h)
        activation = "identity" if layer.kind == "psi" else theta.activation
        cache.append((h, pre, pooled, activation))
        h = {g: (z if activation == "identity" else rho(z)) for g, z in pre.items()}
    return h["I"], cache


def backward_batch(theta, cache, upstream):
    """
    Gradient of sum(upstream * Q) with respect to theta's scalars, in the
    canonical order of `theta.to_vector()`.
    """
    grads = []
    g_out = {"I": np.asarray(upstream, dtype=np.float64)}
    for layer, (h, pre, pooled, activation) in zip(reversed(theta.layers), reversed(cache)):
        grad, g_in = layer_backward(layer, h, pre, pooled, g_out, activation)
        grads.append(grad.to_vector())
        g_out = g_in
    vector = np.concatenate(list(reversed(grads)))
    if theta.local_only:
        vector = vector * theta.pooled_mask()
    return vector


def network_forward(theta, s):
    """QMatrix (N-k, C) for a single PhaseInput."""
    q, _ = forward_batch(theta, [s])
    return q[0]


def network_backward(theta, s, upstream):
    """Gradient w.r.t. theta of sum(upstream * network_forward(theta, s))."""
    upstream = np.asarray(upstream, dtype=np.float64)
    _, cache = forward_batch(theta, [s])
    if upstream.shape != (s.n_unselected, theta.n_commands):
        raise ShapeError(f"Upstream gradient has shape {upstream.shape}, expected {(s.n_unselected, theta.n_commands)}.")
    return backward_batch(theta, cache, upstream[None])


def zero_pooled(theta):
    """Copy of theta with every pooled scalar set to zero, marked local-only."""
    local = SharedParams(theta.copy().layers, theta.groups, theta.activation, True)
    return local.with_vector(local.to_vector() * local.pooled_mask())
