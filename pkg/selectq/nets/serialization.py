"""
SERIALIZATION

JSON documents for trained parameters.

A document holds one or more parameter sets and the phases each set serves:

    {"format_version": 1, "K": 3, "D": 3, "channels": 48,
     "groups": [{"id": "X", "d": 4}, {"id": "I", "d": 3}],
     "activation": "relu", "commands": 5, "kind": "shared",
     "local_only": false,
     "param_sets": [{"phases": [0, 1, 2], "scalars": [...]}]}

Scalars follow the canonical order of `SharedParams.to_vector()`: layer-major,
then cross blocks by group pair, self blocks, biases, each row-major over
(output channel, input channel). Dense documents (`"kind": "dense"`) replace
`groups` by `layer_sizes` and `activations`. Python floats are written with
their shortest round-tripping repr, so a load after a dump is bit-exact.
"""

import json
import logging

import numpy as np

from selectq.constants import FORMAT_VERSION
from selectq.errors import ConfigError
from selectq.matrices.matrices import Matrix
from selectq.nets.groups import GroupSpec
from selectq.nets.layers import SharedLayerParams
from selectq.nets.network import SharedParams
from selectq.nets.projection import DenseNet

logger = logging.getLogger(__name__)


def shared_template(groups, n_commands, depth, channels, activation="relu", local_only=False):
    """An all-zero SharedParams of the given structure."""
    widths = {spec.gid: spec.width for spec in groups}
    layers = []
    for _ in range(depth):
        layers.append(SharedLayerParams.zeros(widths, tuple(widths), channels, "phi"))
        widths = {g: channels for g in widths}
    layers.append(SharedLayerParams.zeros(widths, ("I",), n_commands, "psi"))
    return SharedParams(layers, tuple(groups), activation, local_only)


def dense_template(layer_sizes, activations):
    weights = [Matrix(data=np.zeros((o, i))) for i, o in zip(layer_sizes[:-1], layer_sizes[1:])]
    biases = [Matrix(data=np.zeros((o, 1))) for o in layer_sizes[1:]]
    return DenseNet(weights, biases, list(activations))


def dump_params(param_sets, phases, K):
    """
    Builds the JSON-ready document.

    INPUT:
    - `param_sets` -- list of SharedParams (or of DenseNet), all of one structure,
    - `phases`     -- list, per set, of the phase indices it serves,
    - `K`          -- number of phases.
    """
    if len(param_sets) != len(phases) or not param_sets:
        raise ConfigError(f"Got {len(param_sets)} parameter sets for {len(phases)} phase lists.")
    served = sorted(k for ks in phases for k in ks)
    if served != list(range(K)):
        raise ConfigError(f"Phase lists {phases} do not cover range({K}) exactly once.")
    first = param_sets[0]
    doc = {"format_version": FORMAT_VERSION, "K": int(K)}
    if isinstance(first, DenseNet):
        sizes = [first.in_dim] + [w.nrows for w in first.weights]
        doc.update(
            D=len(first.weights) - 1,
            channels=int(first.weights[0].nrows),
            kind="dense",
            layer_sizes=sizes,
            activations=list(first.activations),
        )
    else:
        doc.update(
            D=first.depth,
            channels=first.channels,
            groups=[{"id": spec.gid, "d": spec.width} for spec in first.groups],
            activation=first.activation,
            commands=first.n_commands,
            kind="shared",
            local_only=bool(first.local_only),
        )
    doc["param_sets"] = [
        {"phases": [int(k) for k in ks], "scalars": params.to_vector().tolist()}
        for params, ks in zip(param_sets, phases)
    ]
    return doc


def load_params(doc):
    """Inverse of `dump_params`: returns (param_sets, phases, K)."""
    if doc.get("format_version") != FORMAT_VERSION:
        raise ConfigError(f"Unsupported format version {doc.get('format_version')!r}; expected {FORMAT_VERSION}.")
    kind = doc.get("kind", "shared")
    if kind == "dense":
        template = dense_template(doc["layer_sizes"], doc["activations"])
    elif kind == "shared":
        groups = tuple(GroupSpec(entry["id"], int(entry["d"])) for entry in doc["groups"])
        template = shared_template(
            groups,
            int(doc["commands"]),
            int(doc["D"]),
            int(doc["channels"]),
            doc["activation"],
            bool(doc.get("local_only", False)),
        )
    else:
        raise ConfigError(f"Unknown parameter kind {kind!r}.")
    param_sets, phases = [], []
    for entry in doc["param_sets"]:
        param_sets.append(template.with_vector(np.array(entry["scalars"], dtype=np.float64)))
        phases.append([int(k) for k in entry["phases"]])
    return param_sets, phases, int(doc["K"])


def save_params(path, param_sets, phases, K):
    doc = dump_params(param_sets, phases, K)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle)
    logger.debug("Wrote %d parameter sets to %s", len(param_sets), path)


def read_params(path):
    with open(path, encoding="utf-8") as handle:
        doc = json.load(handle)
    return load_params(doc)
