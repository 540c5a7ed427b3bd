"""
REPLAY

Experience replay of whole macro steps. A chain stores the K phase states and
actions of one macro step, the reward of its final phase and the phase-0 state
that followed. Intermediate transitions are deterministic, so the chain holds
everything the K per-phase losses need.
"""

from dataclasses import dataclass

from selectq.errors import ShapeError


@dataclass(frozen=True, eq=False)
class ReplayChain:
    """(s_0, a_0, ..., s_{K-1}, a_{K-1}, r, s'_0)."""

    states: tuple
    actions: tuple
    reward: float
    next_state: object

    def __post_init__(self):
        if len(self.states) != len(self.actions) or not self.states:
            raise ShapeError(f"A chain needs one action per phase, got {len(self.states)} states and {len(self.actions)} actions.")
        if [s.k for s in self.states] != list(range(len(self.states))):
            raise ShapeError(f"Chain phases must run 0..K-1, got {[s.k for s in self.states]}.")
        if self.next_state.k != 0:
            raise ShapeError(f"A chain ends in a phase-0 state, got phase {self.next_state.k}.")

    @property
    def K(self):
        return len(self.states)

    @property
    def selection(self):
        """The joint selection as (environment index, command) pairs."""
        last, action = self.states[-1], self.actions[-1]
        return last.selection + ((last.item_ids[action.n], action.c),)


class ReplayBuffer:
    """A FIFO ring buffer of chains."""

    def __init__(self, capacity):
        if capacity < 1:
            raise ValueError(f"Replay capacity must be positive, got {capacity}.")
        self.capacity = capacity
        self.chains = []
        self.insertions = 0

    def __len__(self):
        return len(self.chains)

    def push(self, chain):
        if len(self.chains) < self.capacity:
            self.chains.append(chain)
        else:
            self.chains[self.insertions % self.capacity] = chain
        self.insertions += 1

    def sample(self, rng, size):
        """`size` chains drawn uniformly with replacement."""
        if not self.chains:
            raise ValueError("Cannot sample from an empty replay buffer.")
        return [self.chains[idx] for idx in rng.integers(0, len(self.chains), size=size)]

    def newest(self, n):
        """The `n` most recently inserted chains, oldest first."""
        n = min(n, len(self.chains))
        start = self.insertions - n
        return [self.chains[idx % self.capacity] for idx in range(start, self.insertions)]
