"""
SMDP

The behavioural contract of a Select-MDP.

Every environment reports its sizes (`n_items` N, `n_select` K, `n_commands` C,
`item_width` d_I, `context_width` d_U), returns `(items, context)` from
`reset(seed)`, and consumes exactly K distinct (item index, command) pairs in
`step(selection)`, returning `(reward, items, context)`.
"""

import numpy as np

from selectq.errors import InfeasibleActionError


class AbstractSelectMDP:
    """
    Base class for Select-MDP environments.

    Concrete classes set the five descriptors in `__init__` and implement
    `reset` and `step`.
    """

    def __init__(self, n_items, n_select, n_commands, item_width, context_width=0):
        if not 1 <= n_select <= n_items:
            raise InfeasibleActionError(f"Need 1 <= K <= N, got K={n_select}, N={n_items}.")
        if n_commands < 1:
            raise InfeasibleActionError(f"Need at least one command, got {n_commands}.")
        self.n_items = n_items
        self.n_select = n_select
        self.n_commands = n_commands
        self.item_width = item_width
        self.context_width = context_width

    def reset(self, seed=None):
        raise NotImplementedError

    def step(self, selection):
        raise NotImplementedError

    def observe(self):
        """The current `(items, context)` without advancing."""
        raise NotImplementedError

    def check_selection(self, selection):
        """
        Validates a joint selection and returns it as (indices, commands) arrays.

        Raises `InfeasibleActionError` on a wrong length, repeated item or
        out-of-range index or command.
        """
        selection = [(int(n), int(c)) for n, c in selection]
        if len(selection) != self.n_select:
            raise InfeasibleActionError(f"Expected {self.n_select} selected items, got {len(selection)}.")
        indices = np.array([n for n, _ in selection], dtype=np.int64)
        commands = np.array([c for _, c in selection], dtype=np.int64)
        if len(set(indices.tolist())) != len(indices):
            raise InfeasibleActionError(f"Selection repeats an item: {indices.tolist()}.")
        if np.any(indices < 0) or np.any(indices >= self.n_items):
            raise InfeasibleActionError(f"Item index out of range(0, {self.n_items}): {indices.tolist()}.")
        if np.any(commands < 0) or np.any(commands >= self.n_commands):
            raise InfeasibleActionError(f"Command out of range(0, {self.n_commands}): {commands.tolist()}.")
        return indices, commands
