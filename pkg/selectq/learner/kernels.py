"""
KERNELS

The network families a cascade can hold. A kernel knows how to initialise the
parameters of a phase, evaluate a batch of phase inputs as Q values of shape
(B, N - k, C) and pull an upstream gradient back to a flat parameter vector.

- `SharedKernel` -- equi-invariant shared networks; one parameter set serves
  every phase shape,
- `DenseKernel`  -- fully connected networks over flattened inputs, bound to
  the phase shape they were built for.
"""

import numpy as np

from selectq.errors import ShapeError
from selectq.nets.groups import group_specs
from selectq.nets.network import backward_batch, build_shared_params, forward_batch
from selectq.nets.projection import DenseNet, flatten_inputs


class SharedKernel:
    """Shared networks for items of width d_I, C commands and context width d_U."""

    shape_agnostic = True

    def __init__(self, item_width, n_commands, context_width=0, depth=3, channels=48, activation="relu", local_only=False):
        self.groups = group_specs(item_width, n_commands, context_width)
        self.n_commands = n_commands
        self.depth = depth
        self.channels = channels
        self.activation = activation
        self.local_only = local_only

    def init(self, rng, k=0):
        return build_shared_params(
            rng, self.groups, self.n_commands, self.depth, self.channels, self.activation, self.local_only
        )

    def forward(self, params, inputs):
        return forward_batch(params, inputs)

    def backward(self, params, cache, upstream):
        return backward_batch(params, cache, upstream)


class DenseKernel:
    """Per-phase dense networks for a fixed item count N and context count U."""

    shape_agnostic = False

    def __init__(self, n_items, item_width, n_commands, n_context=0, context_width=0, depth=3, channels=48, activation="relu"):
        self.n_items = n_items
        self.item_width = item_width
        self.n_commands = n_commands
        self.n_context = n_context
        self.context_width = context_width
        self.depth = depth
        self.channels = channels
        self.activation = activation
        self.gids = ("X", "I", "U") if context_width else ("X", "I")

    def sizes(self, k):
        """Layer widths of phase k; hidden layers carry `channels` units per item."""
        n = self.n_items - k
        in_dim = k * (self.item_width + self.n_commands) + n * self.item_width + self.n_context * self.context_width
        hidden = self.channels * (self.n_items + self.n_context)
        return [in_dim] + [hidden] * self.depth + [n * self.n_commands]

    def init(self, rng, k=0):
        return DenseNet.initialize(rng, self.sizes(k), self.activation)

    def forward(self, params, inputs):
        inputs = list(inputs)
        n = inputs[0].n_unselected
        if inputs[0].k + n != self.n_items:
            raise ShapeError(f"Dense network is bound to N={self.n_items}, got a state with {inputs[0].k + n} items.")
        out, cache = params.forward(flatten_inputs(inputs, self.gids))
        q = out.data.T.reshape(len(inputs), n, self.n_commands)
        return q, cache

    def backward(self, params, cache, upstream):
        upstream = np.asarray(upstream, dtype=np.float64)
        columns = upstream.reshape(upstream.shape[0], -1).T
        dweights, dbiases, _ = params.backward(cache, columns)
        return params.gradient_vector(dweights, dbiases)
