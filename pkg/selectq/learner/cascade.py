"""
CASCADE

K cascaded Q-networks with their targets and optimiser states.

`phase_map[k]` names the parameter set of phase k. When the map is refined
(progressive sharing), every new set starts as a bitwise copy of the set that
served its phases before, together with that set's target and Adam moments.
"""

import logging

import numpy as np

from selectq.errors import ConfigError
from selectq.matrices.optim import AdamState, adam_step

logger = logging.getLogger(__name__)


class CascadedQ:
    """
    Main and target parameter sets of a cascade.

    INPUT:
    - `kernel`    -- a SharedKernel or DenseKernel,
    - `K`         -- number of phases,
    - `phase_map` -- tuple, phase -> set index,
    - `rng`       -- a SeededRng used for initialisation,
    - `lr`        -- Adam step size.
    """

    def __init__(self, kernel, K, phase_map, rng, lr):
        if len(phase_map) != K:
            raise ConfigError(f"Phase map {phase_map} does not cover {K} phases.")
        phases = _phases_per_set(phase_map)
        if not kernel.shape_agnostic and any(len(ks) > 1 for ks in phases):
            raise ConfigError("Dense networks cannot share parameters across phases.")
        self.kernel = kernel
        self.K = K
        self.lr = lr
        self.phase_map = tuple(phase_map)
        self.mains = [kernel.init(rng, ks[0]) for ks in phases]
        self.targets = [params.copy() for params in self.mains]
        self.adam = [AdamState.zeros(params.param_count(), lr=lr) for params in self.mains]

    @property
    def n_sets(self):
        return len(self.mains)

    def phases(self):
        """Phases served by each set."""
        return _phases_per_set(self.phase_map)

    def main(self, k):
        return self.mains[self.phase_map[k]]

    def target(self, k):
        return self.targets[self.phase_map[k]]

    def q_values(self, k, s, target=False):
        """QMatrix of phase k on one PhaseInput."""
        params = self.target(k) if target else self.main(k)
        q, _ = self.kernel.forward(params, [s])
        return q[0]

    def sync_targets(self):
        self.targets = [params.copy() for params in self.mains]

    def regroup(self, phase_map):
        """Switches to a finer phase map; new sets copy the set they split from."""
        phase_map = tuple(phase_map)
        if phase_map == self.phase_map:
            return False
        mains, targets, adam = [], [], []
        for ks in _phases_per_set(phase_map):
            parent = self.phase_map[ks[0]]
            if any(self.phase_map[k] != parent for k in ks):
                raise ConfigError(f"Phase map {phase_map} does not refine {self.phase_map}.")
            mains.append(self.mains[parent].copy())
            targets.append(self.targets[parent].copy())
            adam.append(self.adam[parent].copy())
        logger.info("Parameter sets split: %d -> %d", self.n_sets, len(mains))
        self.mains, self.targets, self.adam = mains, targets, adam
        self.phase_map = phase_map
        return True

    def assign(self, param_sets, phases):
        """Replaces every set (mains and targets) by loaded parameters; Adam moments restart."""
        counts = {params.param_count() for params in self.mains}
        for params in param_sets:
            if params.param_count() not in counts:
                raise ConfigError(
                    f"Loaded set has {params.param_count()} scalars; this cascade expects {sorted(counts)}."
                )
        if len(param_sets) != len(phases) or sorted(k for ks in phases for k in ks) != list(range(self.K)):
            raise ConfigError(f"Loaded phase lists {phases} do not cover range({self.K}) exactly once.")
        phase_map = [0] * self.K
        for index, ks in enumerate(phases):
            for k in ks:
                phase_map[k] = index
        _phases_per_set(phase_map)
        self.phase_map = tuple(phase_map)
        self.mains = [params.copy() for params in param_sets]
        self.targets = [params.copy() for params in param_sets]
        self.adam = [AdamState.zeros(params.param_count(), lr=self.lr) for params in param_sets]

    def apply_gradients(self, grads):
        """One Adam step per set with its accumulated gradient."""
        for index, grad in grads.items():
            params = self.mains[index]
            vector, self.adam[index] = adam_step(params.to_vector(), grad, self.adam[index])
            self.mains[index] = params.with_vector(vector)

    def param_vectors(self):
        return [params.to_vector() for params in self.mains]

    def param_count(self):
        return int(sum(params.param_count() for params in self.mains))

    def zero_grads(self):
        return {index: np.zeros(params.param_count()) for index, params in enumerate(self.mains)}


def _phases_per_set(phase_map):
    sets = {}
    for k, index in enumerate(phase_map):
        sets.setdefault(index, []).append(k)
    if sorted(sets) != list(range(len(sets))):
        raise ConfigError(f"Set indices of {phase_map} must be 0..{len(sets) - 1}.")
    return [sets[index] for index in range(len(sets))]
