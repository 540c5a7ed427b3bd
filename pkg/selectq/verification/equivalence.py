"""
EQUIVALENCE

The Select-MDP and its iterative form have the same optimal values.

`check_equivalence` solves both tables of a random tabular instance by value
iteration, compares the value of every joint state with the value of its
phase-0 state, and on states with a unique optimal joint selection checks that
following the greedy phase actions builds that selection.

`check_myopic_gap` certifies, on the delayed-reward instance, that the policy
that is greedy for the immediate reward earns less than the optimal one.
"""

import logging

import numpy as np

from selectq.constants import EQUIVALENCE_TOLERANCE
from selectq.envs.tabular import tabular_random
from selectq.verification.reports import CheckReport
from selectq.verification.solvers import policy_evaluation, value_iteration
from selectq.verification.tables import build_ismdp_table, build_smdp_table, delayed_reward_smdp

logger = logging.getLogger(__name__)

UNIQUE_GAP = 1e-6


def greedy_selection(table, state, K):
    """The joint selection built by K greedy phase actions from (state, ())."""
    partial = ()
    for _ in range(K):
        n, c = table.mdp.actions[table.greedy()[table.mdp.state_index[(state, partial)]]]
        partial = tuple(sorted(partial + ((n, c),)))
    return partial


def compare_tables(smdp, gamma):
    """Returns (max value deviation, selection mismatches, unique-optimum states)."""
    flat = value_iteration(build_smdp_table(smdp), gamma)
    iterative = value_iteration(build_ismdp_table(smdp), gamma)
    deviation = 0.0
    mismatches = unique = 0
    for state in smdp.states:
        deviation = max(deviation, abs(flat.value(state) - iterative.value((state, ()))))
        row = np.sort(flat.q[flat.mdp.state_index[state]])
        if row.size > 1 and row[-1] - row[-2] <= UNIQUE_GAP:
            continue
        unique += 1
        best = flat.mdp.actions[flat.greedy()[flat.mdp.state_index[state]]]
        if greedy_selection(iterative, state, smdp.n_select) != tuple(sorted(best)):
            mismatches += 1
    return deviation, mismatches, unique


def check_equivalence(seed, N=3, A=2, C=1, K=2, gamma=0.9, tol=EQUIVALENCE_TOLERANCE):
    """
    Value and optimal-selection agreement on `tabular_random(seed, N, A, C, K)`.

    A selection mismatch on a unique-optimum state makes the deviation
    infinite.
    """
    smdp = tabular_random(seed, N, A, C, K)
    deviation, mismatches, unique = compare_tables(smdp, gamma)
    if mismatches:
        logger.warning("Seed %d: %d of %d unique optimal selections disagree", seed, mismatches, unique)
        deviation = float("inf")
    return CheckReport(
        "equiv",
        seed,
        len(smdp.states),
        deviation,
        tol,
        f"N={N} A={A} C={C} K={K} gamma={gamma}; {unique} unique-optimum states",
    )


def myopic_policy_values(smdp, gamma):
    """(optimal values, values of the immediate-reward greedy policy) on the iterative table."""
    table = build_ismdp_table(smdp)
    optimal = value_iteration(table, gamma)
    myopic = value_iteration(table, 0.0)
    return optimal.values(), policy_evaluation(table, myopic.greedy(), gamma)


def check_myopic_gap(seed=0, gamma=0.9):
    """
    Passes when the optimal policy beats the myopic one at some phase-0 state
    and is never worse, i.e. when the instance really rewards planning.
    """
    smdp = delayed_reward_smdp(seed)
    optimal, myopic = myopic_policy_values(smdp, gamma)
    shortfall = optimal - myopic
    deviation = 0.0 if shortfall.max() > UNIQUE_GAP and shortfall.min() >= -EQUIVALENCE_TOLERANCE else float("inf")
    return CheckReport("myopic", seed, len(optimal), deviation, 0.0, f"largest shortfall {shortfall.max():.6f}")
