"""
SORTING

Circle Selection with its circles presented largest first.

`SortedItems` wraps an environment so that the item list it returns is sorted
by radius in descending order (ties keep their environment order) and maps
the selected rows back to environment indices before stepping. A dense
network trained on the wrapped environment sees one canonical item order.
"""

import numpy as np

from selectq.errors import ShapeError
from selectq.mdp.smdp import AbstractSelectMDP

RADIUS = 2


def sort_items(items):
    """
    Returns (sorted items, order) where `order[n]` is the original index of
    row n of the sorted list.
    """
    items = np.asarray(items, dtype=np.float64)
    if items.ndim != 2 or items.shape[1] != 3:
        raise ShapeError(f"Sorting needs circle features (pos_x, pos_y, radius), got shape {items.shape}.")
    order = np.argsort(-items[:, RADIUS], kind="stable")
    return items[order], order


class SortedItems(AbstractSelectMDP):
    """An environment view whose items come sorted by radius."""

    def __init__(self, env):
        super().__init__(env.n_items, env.n_select, env.n_commands, env.item_width, env.context_width)
        self.env = env
        self.order = np.arange(env.n_items)

    def _sorted(self, items, context):
        items, self.order = sort_items(items)
        return items, context

    def reset(self, seed=None):
        return self._sorted(*self.env.reset(seed))

    def observe(self):
        return self._sorted(*self.env.observe())

    def step(self, selection):
        indices, commands = self.check_selection(selection)
        reward, items, context = self.env.step(list(zip(self.order[indices].tolist(), commands.tolist())))
        items, context = self._sorted(items, context)
        return reward, items, context

    def __getattr__(self, name):
        if name == "env":
            raise AttributeError(name)
        return getattr(self.env, name)
