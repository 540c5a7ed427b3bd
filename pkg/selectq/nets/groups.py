"""
GROUPS

Item groups, phase inputs and permutations.

A phase input carries three groups of per-item feature vectors:
- `X` -- the k already selected (info, one-hot command) pairs,
- `I` -- the N-k unselected item infos,
- `U` -- context items that can never be selected (possibly none).

Only `I` has an equivariant output: row n of a QMatrix belongs to unselected
item n. A QMatrix is a plain `(N-k, C)` float64 `numpy.ndarray`.

Permutations act by re-indexing: `apply_permutation(sigma, s).i[n] == s.i[sigma.i[n]]`.
"""

from dataclasses import dataclass

import numpy as np

from selectq.errors import NonFiniteError, ShapeError

GROUP_ORDER = ("X", "I", "U")


@dataclass(frozen=True)
class GroupSpec:
    """One item group: id, per-item feature width, equivariant-output flag."""

    gid: str
    width: int

    def __post_init__(self):
        if self.gid not in GROUP_ORDER:
            raise ShapeError(f"Unknown group id {self.gid!r}; expected one of {GROUP_ORDER}.")
        if self.width < 1:
            raise ShapeError(f"Group {self.gid} must have width >= 1, got {self.width}.")

    @property
    def equivariant_output(self):
        return self.gid == "I"


def group_specs(item_width, n_commands, context_width=0):
    """The groups of a phase network: X and I always, U when there is context."""
    specs = [GroupSpec("X", item_width + n_commands), GroupSpec("I", item_width)]
    if context_width:
        specs.append(GroupSpec("U", context_width))
    return tuple(specs)


def _as_rows(array, width, name):
    array = np.asarray(array, dtype=np.float64)
    if array.size == 0:
        return np.zeros((0, width), dtype=np.float64)
    if array.ndim != 2 or array.shape[1] != width:
        raise ShapeError(f"Group {name} expects rows of width {width}, got shape {array.shape}.")
    return array


@dataclass(frozen=True, eq=False)
class PhaseInput:
    """
    The network-facing view of an IS-MDP phase state.

    INPUT:
    - `x` -- array (k, d_I + C) of selected pairs,
    - `i` -- array (N - k, d_I) of unselected item infos,
    - `u` -- array (|U|, d_U) of context infos (may have zero rows).
    """

    x: np.ndarray
    i: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        for name in ("x", "i", "u"):
            value = np.asarray(getattr(self, name), dtype=np.float64)
            if value.ndim == 1 and value.size == 0:
                value = value.reshape(0, 0)
            if value.ndim != 2:
                raise ShapeError(f"Group {name} must be two-dimensional, got shape {value.shape}.")
            if not np.all(np.isfinite(value)):
                raise NonFiniteError(f"Group {name} contains non-finite features.")
            object.__setattr__(self, name, value)

    @classmethod
    def build(cls, x, i, u, *, item_width, n_commands, context_width=0):
        """Constructor that fixes the widths of empty groups."""
        return cls(
            x=_as_rows(x, item_width + n_commands, "X"),
            i=_as_rows(i, item_width, "I"),
            u=_as_rows(u, context_width, "U"),
        )

    @property
    def k(self):
        return self.x.shape[0]

    @property
    def n_unselected(self):
        return self.i.shape[0]

    @property
    def n_context(self):
        return self.u.shape[0]

    def groups(self):
        """Returns {gid: rows} in GROUP_ORDER."""
        return {"X": self.x, "I": self.i, "U": self.u}

    def sizes(self):
        return (self.k, self.n_unselected, self.n_context)


def stack_inputs(inputs, gids):
    """
    Stacks a list of PhaseInputs of identical shape into {gid: (B, n_g, P_g)}.
    """
    if not inputs:
        raise ShapeError("Cannot stack an empty list of phase inputs.")
    batch = {}
    for gid in gids:
        rows = [s.groups()[gid] for s in inputs]
        shape = rows[0].shape
        for r in rows[1:]:
            if r.shape != shape:
                raise ShapeError(f"Group {gid} shapes differ within a batch: {shape} vs {r.shape}.")
        batch[gid] = np.stack(rows, axis=0)
    return batch


def _check_bijection(perm, n, name):
    perm = np.asarray(perm, dtype=np.int64).reshape(-1)
    if perm.shape[0] != n or not np.array_equal(np.sort(perm), np.arange(n)):
        raise ShapeError(f"sigma_{name} is not a bijection on range({n}): {perm.tolist()}.")
    return perm


@dataclass(frozen=True, eq=False)
class Permutation:
    """A triple (sigma_x, sigma_i, sigma_u) of index bijections."""

    x: np.ndarray
    i: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        for name in ("x", "i", "u"):
            perm = np.asarray(getattr(self, name), dtype=np.int64).reshape(-1)
            object.__setattr__(self, name, _check_bijection(perm, perm.shape[0], name))

    @classmethod
    def identity(cls, k, n, m=0):
        return cls(np.arange(k), np.arange(n), np.arange(m))

    @classmethod
    def random(cls, rng, k, n, m=0):
        return cls(rng.permutation(k), rng.permutation(n), rng.permutation(m))

    def sizes(self):
        return (self.x.shape[0], self.i.shape[0], self.u.shape[0])

    def inverse(self):
        return Permutation(np.argsort(self.x), np.argsort(self.i), np.argsort(self.u))

    def compose(self, other):
        """`apply(self.compose(other), s) == apply(self, apply(other, s))`."""
        if self.sizes() != other.sizes():
            raise ShapeError(f"Cannot compose permutations of sizes {self.sizes()} and {other.sizes()}.")
        return Permutation(other.x[self.x], other.i[self.i], other.u[self.u])

    def __eq__(self, other):
        return (
            np.array_equal(self.x, other.x)
            and np.array_equal(self.i, other.i)
            and np.array_equal(self.u, other.u)
        )


def apply_permutation(sigma, s):
    """Re-indexes every group of `s` by `sigma`."""
    if sigma.sizes() != s.sizes():
        raise ShapeError(f"Permutation of sizes {sigma.sizes()} cannot act on a state of sizes {s.sizes()}.")
    return PhaseInput(x=s.x[sigma.x], i=s.i[sigma.i], u=s.u[sigma.u])


def permute_rows(sigma_i, q):
    """Re-indexes the rows of a QMatrix (or any array indexed by unselected item)."""
    sigma_i = np.asarray(sigma_i, dtype=np.int64)
    q = np.asarray(q)
    if sigma_i.shape[0] != q.shape[0]:
        raise ShapeError(f"Row permutation of size {sigma_i.shape[0]} cannot act on {q.shape[0]} rows.")
    return q[sigma_i]
