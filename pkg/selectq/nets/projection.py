"""
PROJECTION

Dense expansion of shared networks.

`project_params(theta, k, N, U)` writes every tied scalar into the dense weight
matrices of the equivalent unshared network for a fixed phase shape; the result
is a `DenseNet` acting on flattened states. Flattening is group-major in
GROUP_ORDER, then item-major, then channel, and the output is item-major over
the N-k unselected items with C commands each.

`pull_back_gradient` is the adjoint of that projection: the gradient of a tied
scalar is the coefficient-weighted sum of the dense gradients at every position
it was written to. `permute_dense` relabels items inside dense weights.
"""

from dataclasses import dataclass

import numpy as np

from selectq.errors import ShapeError
from selectq.matrices.matrices import Matrix, matmul
from selectq.nets.layers import ACTIVATIONS


@dataclass(eq=False)
class DenseNet:
    """
    A fully connected network on column-stacked inputs (in_dim, B).

    `weights[l]` is a Matrix (out_l, in_l), `biases[l]` a Matrix (out_l, 1) and
    `activations[l]` the name of the function applied after layer l.
    """

    weights: list
    biases: list
    activations: list

    def __post_init__(self):
        if not self.weights:
            raise ShapeError("A dense network needs at least one layer.")
        for depth, (w, b) in enumerate(zip(self.weights, self.biases)):
            if b.size() != (w.nrows, 1):
                raise ShapeError(f"Bias of layer {depth} has size {b.size()}, expected {(w.nrows, 1)}.")
            if depth and w.ncols != self.weights[depth - 1].nrows:
                raise ShapeError(f"Layer {depth} expects {w.ncols} inputs, previous layer gives {self.weights[depth - 1].nrows}.")

    @classmethod
    def initialize(cls, rng, sizes, activation="relu"):
        """Uniform +-1/sqrt(fan_in) weights; linear last layer."""
        weights, biases = [], []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = 1.0 / np.sqrt(fan_in)
            weights.append(Matrix(data=rng.uniform(-bound, bound, size=(fan_out, fan_in))))
            biases.append(Matrix(data=rng.uniform(-bound, bound, size=(fan_out, 1))))
        activations = [activation] * (len(weights) - 1) + ["identity"]
        return cls(weights, biases, activations)

    @property
    def in_dim(self):
        return self.weights[0].ncols

    @property
    def out_dim(self):
        return self.weights[-1].nrows

    def param_count(self):
        return int(sum(w.nrows * w.ncols + b.nrows for w, b in zip(self.weights, self.biases)))

    def to_vector(self):
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.data.reshape(-1))
            parts.append(b.data.reshape(-1))
        return np.concatenate(parts)

    def with_vector(self, vector):
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (self.param_count(),):
            raise ShapeError(f"Dense network expects {self.param_count()} scalars, got {vector.shape}.")
        weights, biases = [], []
        offset = 0
        for w, b in zip(self.weights, self.biases):
            weights.append(Matrix(data=vector[offset : offset + w.nrows * w.ncols].reshape(w.size())))
            offset += w.nrows * w.ncols
            biases.append(Matrix(data=vector[offset : offset + b.nrows].reshape(b.size())))
            offset += b.nrows
        return DenseNet(weights, biases, list(self.activations))

    def copy(self):
        return self.with_vector(self.to_vector())

    def forward(self, inputs):
        """`inputs` is a Matrix (in_dim, B); returns (Matrix (out_dim, B), cache)."""
        if inputs.nrows != self.in_dim:
            raise ShapeError(f"Dense network expects {self.in_dim} input rows, got {inputs.nrows}.")
        cache = []
        h = inputs
        for w, b, name in zip(self.weights, self.biases, self.activations):
            z = matmul(w, h).data + b.data
            cache.append((h, z))
            h = Matrix(data=ACTIVATIONS[name][0](z))
        return h, cache

    def backward(self, cache, upstream):
        """
        Gradients of sum(upstream * output). Returns (dweights, dbiases, dinputs)
        as numpy arrays.
        """
        g = np.asarray(upstream.data if isinstance(upstream, Matrix) else upstream, dtype=np.float64)
        dweights, dbiases = [], []
        for w, name, (h, z) in zip(reversed(self.weights), reversed(self.activations), reversed(cache)):
            dz = g * ACTIVATIONS[name][1](z)
            dweights.append(dz @ h.data.T)
            dbiases.append(dz.sum(axis=1, keepdims=True))
            g = w.data.T @ dz
        return list(reversed(dweights)), list(reversed(dbiases)), g

    def gradient_vector(self, dweights, dbiases):
        parts = []
        for dw, db in zip(dweights, dbiases):
            parts.append(dw.reshape(-1))
            parts.append(db.reshape(-1))
        return np.concatenate(parts)


def phase_counts(theta, k, N, U):
    """{gid: item count} for the groups of theta at phase k."""
    if not 0 <= k < N:
        raise ShapeError(f"Phase {k} is not actionable with {N} items.")
    counts = {"X": k, "I": N - k, "U": U}
    if "U" not in theta.gids and U:
        raise ShapeError(f"Network has no context group but {U} context items were requested.")
    return {g: counts[g] for g in theta.gids}


def _layer_dense(layer, counts):
    rows = []
    for g in layer.out_groups:
        blocks = []
        for h in layer.in_widths:
            n_g, n_h = counts[g], counts[h]
            block = np.zeros((n_g * layer.out_width, n_h * layer.in_widths[h]))
            if n_h > 0 and n_g > 0:
                block += np.kron(np.ones((n_g, n_h)), layer.cross_w[(g, h)] / n_h)
            if g == h:
                block += np.kron(np.eye(n_g), layer.self_w[g])
            blocks.append(block)
        rows.append(np.hstack(blocks))
    weight = np.vstack(rows)
    bias = np.concatenate([np.tile(layer.bias[g], counts[g]) for g in layer.out_groups])
    return weight, bias.reshape(-1, 1)


def project_params(theta, k, N, U=0):
    """omega(theta): the dense network equivalent to theta at this phase shape."""
    counts = phase_counts(theta, k, N, U)
    weights, biases, activations = [], [], []
    for layer in theta.layers:
        w, b = _layer_dense(layer, counts)
        weights.append(Matrix(data=w))
        biases.append(Matrix(data=b))
        activations.append("identity" if layer.kind == "psi" else theta.activation)
    return DenseNet(weights, biases, activations)


def flatten_inputs(inputs, gids):
    """Column-stacks PhaseInputs into a Matrix (in_dim, B)."""
    columns = []
    for s in inputs:
        groups = s.groups()
        columns.append(np.concatenate([groups[g].reshape(-1) for g in gids]))
    return Matrix(data=np.stack(columns, axis=1))


def dense_forward(dense, s, gids, n_commands):
    """QMatrix (N-k, C) of a dense network on one PhaseInput."""
    out, _ = dense.forward(flatten_inputs([s], gids))
    return out.data[:, 0].reshape(s.n_unselected, n_commands)


def pull_back_gradient(theta, dweights, dbiases, k, N, U=0):
    """Adjoint of project_params: tied gradient from dense gradients."""
    counts = phase_counts(theta, k, N, U)
    parts = []
    for layer, dw, db in zip(theta.layers, dweights, dbiases):
        grad = layer.copy()
        row = 0
        for g in layer.out_groups:
            n_g, O = counts[g], layer.out_width
            col = 0
            for h in layer.in_widths:
                n_h, P = counts[h], layer.in_widths[h]
                block = dw[row : row + n_g * O, col : col + n_h * P].reshape(n_g, O, n_h, P)
                grad.cross_w[(g, h)] = block.sum(axis=(0, 2)) / n_h if n_h > 0 else np.zeros((O, P))
                if g == h:
                    grad.self_w[g] = np.einsum("jojp->op", block)
                col += n_h * P
            grad.bias[g] = db[row : row + n_g * O, 0].reshape(n_g, O).sum(axis=0)
            row += n_g * O
        parts.append(grad.to_vector())
    return np.concatenate(parts)


def _index_map(sigma, counts, widths):
    """Old flat position -> new flat position when item j of group g moves to sigma_g[j]."""
    maps = []
    offset = 0
    perms = {"X": sigma.x, "I": sigma.i, "U": sigma.u}
    for g in widths:
        n, P = counts[g], widths[g]
        perm = perms[g]
        if perm.shape[0] != n:
            raise ShapeError(f"sigma_{g.lower()} has size {perm.shape[0]}, group has {n} items.")
        item = np.repeat(perm, P)
        channel = np.tile(np.arange(P), n)
        maps.append(offset + item * P + channel)
        offset += n * P
    return np.concatenate(maps) if maps else np.zeros(0, dtype=np.int64)


def permute_dense(dense, theta, sigma, k, N, U=0):
    """
    Sigma(omega): relabels items in every dense layer so that the entry at
    (sigma(j), sigma(i)) of the result is the entry at (j, i) of `dense`.
    """
    counts = phase_counts(theta, k, N, U)
    weights, biases = [], []
    for layer, w, b in zip(theta.layers, dense.weights, dense.biases):
        in_map = _index_map(sigma, counts, layer.in_widths)
        out_map = _index_map(sigma, counts, {g: layer.out_width for g in layer.out_groups})
        new_w = np.empty_like(w.data)
        new_w[np.ix_(out_map, in_map)] = w.data
        new_b = np.empty_like(b.data)
        new_b[out_map] = b.data
        weights.append(Matrix(data=new_w))
        biases.append(Matrix(data=new_b))
    return DenseNet(weights, biases, list(dense.activations))
