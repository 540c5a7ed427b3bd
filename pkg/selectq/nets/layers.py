"""
LAYERS

Parameter-shared layers over item groups.

For an output group g, output channel o and item j, a shared layer computes

    rho( sum_p W_g[o, p] * x_{g,j}[p]
         + sum_{g'} sum_p (W_{g,g'}[o, p] / |g'|) * sum_{j'} x_{g',j'}[p]
         + b_g[o] )

so each item sees its own features through the self weight and every group
(its own included) through a mean-pooled cross weight. A group with no items
contributes no pooled term. `phi` layers emit every group; the `psi` layer
emits only the unselected group `I` and is linear.

Inputs and outputs are dictionaries {gid: array}. Arrays are either a single
state (n_g, P_g) or a batch (B, n_g, P_g).
"""

from dataclasses import dataclass

import numpy as np

from selectq.errors import ShapeError
from selectq.nets.groups import GROUP_ORDER


def _softplus(z):
    return np.logaddexp(0.0, z)


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


# name -> (rho, rho') with rho' evaluated at the pre-activation.
ACTIVATIONS = {
    "identity": (lambda z: z, lambda z: np.ones_like(z)),
    "relu": (lambda z: np.maximum(z, 0.0), lambda z: (z > 0.0).astype(np.float64)),
    "tanh": (np.tanh, lambda z: 1.0 - np.tanh(z) ** 2),
    "softplus": (_softplus, _sigmoid),
}


def _order(gids):
    return tuple(g for g in GROUP_ORDER if g in gids)


@dataclass(eq=False)
class SharedLayerParams:
    """
    Tied scalars of one layer.

    - `in_widths`  -- {g': P_g'} input channels per group,
    - `out_groups` -- groups that receive an output,
    - `out_width`  -- O, output channels of every output group,
    - `self_w`     -- {g: (O, P_g)},
    - `cross_w`    -- {(g, g'): (O, P_g')},
    - `bias`       -- {g: (O,)}.

    The scalar count depends on channel widths and group count only.
    """

    in_widths: dict
    out_groups: tuple
    out_width: int
    self_w: dict
    cross_w: dict
    bias: dict
    kind: str = "phi"

    def __post_init__(self):
        self.in_widths = {g: int(self.in_widths[g]) for g in _order(self.in_widths)}
        self.out_groups = _order(self.out_groups)
        for g in self.out_groups:
            if g not in self.in_widths:
                raise ShapeError(f"Output group {g} has no input channels.")
            if self.self_w[g].shape != (self.out_width, self.in_widths[g]):
                raise ShapeError(f"Self weight of group {g} has shape {self.self_w[g].shape}.")
            if self.bias[g].shape != (self.out_width,):
                raise ShapeError(f"Bias of group {g} has shape {self.bias[g].shape}.")
            for h in self.in_widths:
                if self.cross_w[(g, h)].shape != (self.out_width, self.in_widths[h]):
                    raise ShapeError(f"Cross weight {g}<-{h} has shape {self.cross_w[(g, h)].shape}.")

    @classmethod
    def zeros(cls, in_widths, out_groups, out_width, kind="phi"):
        in_widths = {g: in_widths[g] for g in _order(in_widths)}
        out_groups = _order(out_groups)
        return cls(
            in_widths=in_widths,
            out_groups=out_groups,
            out_width=out_width,
            self_w={g: np.zeros((out_width, in_widths[g])) for g in out_groups},
            cross_w={(g, h): np.zeros((out_width, in_widths[h])) for g in out_groups for h in in_widths},
            bias={g: np.zeros(out_width) for g in out_groups},
            kind=kind,
        )

    @classmethod
    def initialize(cls, rng, in_widths, out_groups, out_width, kind="phi"):
        """
        Uniform in +-1/sqrt(fan_in), one bound per output group g.

        The fan-in counts every input channel that feeds an output entry of g:
        its own P_g channels through the self block and the pooled P_g' channels
        of every input group through the cross blocks, so fan_in = P_g + sum of
        all P_g'. All blocks and the bias of g share that bound.
        """
        layer = cls.zeros(in_widths, out_groups, out_width, kind)
        pooled = sum(layer.in_widths.values())
        for g in layer.out_groups:
            bound = 1.0 / np.sqrt(layer.in_widths[g] + pooled)
            layer.self_w[g] = rng.uniform(-bound, bound, size=layer.self_w[g].shape)
            for h in layer.in_widths:
                layer.cross_w[(g, h)] = rng.uniform(-bound, bound, size=layer.cross_w[(g, h)].shape)
            layer.bias[g] = rng.uniform(-bound, bound, size=layer.out_width)
        return layer

    def blocks(self):
        """
        Canonical scalar order: cross weights by (g, g') lexicographic in
        GROUP_ORDER, then self weights by g, then biases by g. Each block is
        row-major over (output channel, input channel).
        """
        out = [("cross", (g, h), self.cross_w[(g, h)]) for g in self.out_groups for h in self.in_widths]
        out += [("self", g, self.self_w[g]) for g in self.out_groups]
        out += [("bias", g, self.bias[g]) for g in self.out_groups]
        return out

    def param_count(self):
        return sum(block.size for _, _, block in self.blocks())

    def to_vector(self):
        return np.concatenate([block.reshape(-1) for _, _, block in self.blocks()])

    def with_vector(self, vector):
        """A copy of self whose scalars are read from `vector` in canonical order."""
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (self.param_count(),):
            raise ShapeError(f"Layer expects {self.param_count()} scalars, got {vector.shape}.")
        layer = SharedLayerParams.zeros(self.in_widths, self.out_groups, self.out_width, self.kind)
        offset = 0
        for name, key, block in self.blocks():
            chunk = vector[offset : offset + block.size].reshape(block.shape).copy()
            offset += block.size
            getattr(layer, {"cross": "cross_w", "self": "self_w", "bias": "bias"}[name])[key] = chunk
        return layer

    def copy(self):
        return self.with_vector(self.to_vector())


def _batched(inputs, widths):
    """Promotes single-state arrays to a batch of one and checks widths."""
    single = None
    batch = {}
    for g, width in widths.items():
        if g not in inputs:
            raise ShapeError(f"Input is missing group {g}.")
        a = np.asarray(inputs[g], dtype=np.float64)
        if single is None:
            single = a.ndim == 2
        if a.ndim == 2:
            a = a[None]
        if a.ndim != 3:
            raise ShapeError(f"Group {g} must have 2 or 3 dimensions, got {a.ndim}.")
        if a.shape[1] == 0:
            a = np.zeros((a.shape[0], 0, width))
        elif a.shape[2] != width:
            raise ShapeError(f"Group {g} has {a.shape[2]} channels, layer expects {width}.")
        batch[g] = a
    return batch, bool(single)


def _pooled(batch):
    """Mean over items per group; zeros for an empty group."""
    pooled = {}
    for g, a in batch.items():
        n = a.shape[1]
        pooled[g] = a.sum(axis=1) / n if n > 0 else np.zeros((a.shape[0], a.shape[2]))
    return pooled


def layer_pre_activation(params, batch):
    """Affine part of the layer on a batch; returns ({g: pre}, pooled)."""
    pooled = _pooled(batch)
    pre = {}
    for g in params.out_groups:
        a = batch[g]
        z = np.einsum("bnp,op->bno", a, params.self_w[g])
        shared = params.bias[g][None, :].repeat(a.shape[0], axis=0)
        for h in params.in_widths:
            shared = shared + pooled[h] @ params.cross_w[(g, h)].T
        pre[g] = z + shared[:, None, :]
    return pre, pooled


def layer_forward(params, inputs, activation="identity"):
    """
    Applies the layer to {gid: array}. Returns {gid: array} for the output
    groups, with the same rank as the inputs.
    """
    batch, single = _batched(inputs, params.in_widths)
    rho, _ = ACTIVATIONS[activation]
    pre, _ = layer_pre_activation(params, batch)
    out = {g: rho(z) for g, z in pre.items()}
    if single:
        out = {g: z[0] for g, z in out.items()}
    return out


def layer_backward(params, batch, pre, pooled, upstream, activation):
    """
    Gradients of one batched layer.

    `upstream` is {g: dL/d(output)} for the output groups. Returns
    (gradient as a SharedLayerParams, {g': dL/d(input)}).
    """
    _, drho = ACTIVATIONS[activation]
    grad = SharedLayerParams.zeros(params.in_widths, params.out_groups, params.out_width, params.kind)
    dinputs = {h: np.zeros_like(batch[h]) for h in params.in_widths}
    for g in params.out_groups:
        dz = upstream[g] * drho(pre[g])
        grad.bias[g] = dz.sum(axis=(0, 1))
        grad.self_w[g] = np.einsum("bno,bnp->op", dz, batch[g])
        dinputs[g] += np.einsum("bno,op->bnp", dz, params.self_w[g])
        dshared = dz.sum(axis=1)
        for h in params.in_widths:
            grad.cross_w[(g, h)] = dshared.T @ pooled[h]
            n = batch[h].shape[1]
            if n > 0:
                dinputs[h] += ((dshared @ params.cross_w[(g, h)]) / n)[:, None, :]
    return grad, dinputs
