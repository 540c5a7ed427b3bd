"""
RNG

Seeded random streams. `SeededRng` wraps a `numpy.random.Generator` on the
PCG64 bit generator, whose output is identical on every platform for a given
seed. Independent child streams come from `SeedSequence.spawn`, so that seeds,
environments and replay sampling never share state.
"""

import numpy as np


class SeededRng:
    """
    A reproducible random stream.

    INPUT:
    - `seed` -- a non-negative integer, or a `numpy.random.SeedSequence`.
    """

    def __init__(self, seed):
        if isinstance(seed, np.random.SeedSequence):
            self.seed_sequence = seed
        else:
            if int(seed) < 0:
                raise ValueError(f"Seed must be non-negative, got {seed}.")
            self.seed_sequence = np.random.SeedSequence(int(seed))
        self.generator = np.random.Generator(np.random.PCG64(self.seed_sequence))

    @property
    def seed(self):
        return self.seed_sequence.entropy

    def spawn(self, n):
        """Returns `n` independent child streams."""
        return [SeededRng(child) for child in self.seed_sequence.spawn(n)]

    def child(self):
        return self.spawn(1)[0]

    def uniform(self, low=0.0, high=1.0, size=None):
        return self.generator.uniform(low, high, size=size)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self.generator.normal(loc, scale, size=size)

    def integers(self, low, high=None, size=None):
        return self.generator.integers(low, high, size=size)

    def random(self, size=None):
        return self.generator.random(size=size)

    def permutation(self, n):
        return self.generator.permutation(n)

    def choice(self, a, size=None, replace=True, p=None):
        return self.generator.choice(a, size=size, replace=replace, p=p)

    def dirichlet(self, alpha, size=None):
        return self.generator.dirichlet(alpha, size=size)

    def state(self):
        """Snapshot of the bit generator state, for bitwise reproduction."""
        return self.generator.bit_generator.state
