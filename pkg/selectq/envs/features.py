"""
FEATURES

Per-entity feature vectors. Circles map to (pos_x, pos_y, radius) unchanged;
grid entities map to (x / G, y / G). Both maps act row by row, so they commute
with any reordering of the entity list.
"""

import numpy as np

from selectq.errors import ShapeError


def featurize_circles(positions, radii):
    """(pos_x, pos_y, radius) per circle."""
    return np.column_stack([np.asarray(positions, dtype=np.float64), np.asarray(radii, dtype=np.float64)])


def featurize_grid(cells, G):
    """(x / G, y / G) per grid entity."""
    return np.asarray(cells, dtype=np.float64) / G


def featurize(entity, G=None):
    """
    Feature vector of a single entity: a Circle, a (x, y, radius) triple, or a
    grid cell (x, y) when the grid size `G` is given.
    """
    if hasattr(entity, "radius"):
        return np.array([entity.pos_x, entity.pos_y, entity.radius], dtype=np.float64)
    entity = np.asarray(entity, dtype=np.float64)
    if G is not None:
        if entity.shape != (2,):
            raise ShapeError(f"A grid entity is an (x, y) cell, got shape {entity.shape}.")
        return featurize_grid(entity, G)
    if entity.shape != (3,):
        raise ShapeError(f"A circle is (pos_x, pos_y, radius), got shape {entity.shape}.")
    return entity.copy()
