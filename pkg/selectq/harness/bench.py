"""
BENCH

Wall-clock timings of one phase-0 network at growing item counts.

For each N the shared network is timed forward and backward on a batch of
phase inputs, and its dense projection is timed forward on the same batch.
The parameter count of the shared network does not depend on N; that of the
projection grows quadratically.
"""

import logging
import time

import numpy as np

from selectq.matrices.rng import SeededRng
from selectq.nets.groups import PhaseInput, group_specs
from selectq.nets.network import backward_batch, build_shared_params, forward_batch
from selectq.nets.projection import flatten_inputs, project_params

logger = logging.getLogger(__name__)

ITEM_WIDTH = 3
CONTEXT_WIDTH = 3


def _timed(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return 1000.0 * best


def bench(sizes=(5, 10, 20, 50), n_commands=5, n_context=5, depth=3, channels=16, batch=32, repeats=3, seed=0):
    """
    Returns one row per N with the keys N, shared_params, dense_params,
    shared_forward_ms, shared_backward_ms and dense_forward_ms (best of
    `repeats`).
    """
    rng = SeededRng(seed)
    groups = group_specs(ITEM_WIDTH, n_commands, CONTEXT_WIDTH if n_context else 0)
    theta = build_shared_params(rng, groups, n_commands, depth, channels, "relu")
    rows = []
    for N in sizes:
        inputs = [
            PhaseInput.build(
                np.zeros((0, ITEM_WIDTH + n_commands)),
                rng.normal(size=(N, ITEM_WIDTH)),
                rng.normal(size=(n_context, CONTEXT_WIDTH)),
                item_width=ITEM_WIDTH,
                n_commands=n_commands,
                context_width=CONTEXT_WIDTH if n_context else 0,
            )
            for _ in range(batch)
        ]
        dense = project_params(theta, 0, N, n_context)
        columns = flatten_inputs(inputs, theta.gids)
        q, cache = forward_batch(theta, inputs)
        upstream = np.ones_like(q)
        row = {
            "N": int(N),
            "shared_params": theta.param_count(),
            "dense_params": dense.param_count(),
            "shared_forward_ms": _timed(lambda: forward_batch(theta, inputs), repeats),
            "shared_backward_ms": _timed(lambda: backward_batch(theta, cache, upstream), repeats),
            "dense_forward_ms": _timed(lambda: dense.forward(columns), repeats),
        }
        logger.info(
            "N=%d: shared %d params, dense %d params, forward %.2f ms vs %.2f ms",
            N, row["shared_params"], row["dense_params"], row["shared_forward_ms"], row["dense_forward_ms"],
        )
        rows.append(row)
    return rows
