"""
STATS

Summary statistics for learning curves and randomness checks.
"""

import numpy as np
from scipy import stats


def mean_ci95(values):
    """Sample mean and the half-width of its Student-t 95% interval (0 for one value)."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("Cannot summarise an empty sample.")
    mean = float(values.mean())
    if values.size < 2:
        return mean, 0.0
    sem = float(stats.sem(values))
    return mean, float(stats.t.ppf(0.975, values.size - 1) * sem)


def standard_error(values):
    values = np.asarray(values, dtype=np.float64)
    return float(stats.sem(values)) if values.size > 1 else 0.0


def uniformity_pvalue(counts):
    """Chi-square goodness-of-fit p-value of `counts` against the uniform law."""
    counts = np.asarray(counts, dtype=np.float64)
    return float(stats.chisquare(counts).pvalue)
