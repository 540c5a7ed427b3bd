"""
SHARING

Which parameter set serves which phase.

- `I` -- every phase owns its set,
- `U` -- every phase uses set 0,
- `P` -- all phases start on one set; at each split step every set is split
  into two contiguous halves, so after j splits there are min(2^j, K) sets.

A P schedule of T steps on K phases has ceil(log2 K) splits, split j falling at
step j * T / (ceil(log2 K) + 1).
"""

import math
from dataclasses import dataclass

import numpy as np

from selectq.errors import ConfigError


@dataclass(frozen=True)
class SharingMode:
    """A sharing variant and, for P, its strictly increasing split steps."""

    variant: str
    splits: tuple = ()

    def __post_init__(self):
        if self.variant not in ("I", "U", "P"):
            raise ConfigError(f"Unknown sharing variant {self.variant!r}; expected I, U or P.")
        if any(b <= a for a, b in zip(self.splits, self.splits[1:])):
            raise ConfigError(f"Split steps must be strictly increasing, got {self.splits}.")
        if self.variant != "P" and self.splits:
            raise ConfigError(f"Only P sharing has split steps, got {self.splits} for {self.variant}.")

    @classmethod
    def build(cls, variant, total_steps=0, K=1):
        if variant == "P":
            return cls("P", split_schedule(total_steps, K))
        return cls(variant)


def split_schedule(total_steps, K):
    count = math.ceil(math.log2(K)) if K > 1 else 0
    steps = []
    for j in range(1, count + 1):
        step = j * total_steps // (count + 1)
        steps.append(max(step, steps[-1] + 1) if steps else step)
    return tuple(steps)


def passed_splits(mode, step):
    return sum(1 for s in mode.splits if step >= s)


def sharing_groups(mode, step, K):
    """The phase -> set index map in force at `step`."""
    if mode.variant == "I":
        return tuple(range(K))
    if mode.variant == "U":
        return (0,) * K
    blocks = [np.arange(K)]
    for _ in range(passed_splits(mode, step)):
        blocks = [half for block in blocks for half in np.array_split(block, 2) if half.size]
    phase_map = [0] * K
    for set_index, block in enumerate(blocks):
        for k in block:
            phase_map[int(k)] = set_index
    return tuple(phase_map)


def set_count(phase_map):
    return len(set(phase_map))
