"""
TABLES

Enumerated MDPs built from a `TabularSMDP`.

`build_smdp_table` lists every joint state and every joint selection.
`build_ismdp_table` lists every phase state, a joint state together with the
set of (item, command) pairs already chosen, and every (item, command) action.
Actions on an item that is already chosen are infeasible. Intermediate
transitions are deterministic, carry reward 0 and are not discounted; the
transition that completes the selection draws the next joint state, pays the
Select-MDP reward and is discounted.

`ismdp_symmetry_deviation` relabels item slots across a whole iterative table
and reports how far its entries move.
"""

import logging
from dataclasses import dataclass

import numpy as np

from selectq.constants import TABULAR_GUARD
from selectq.envs.tabular import UNSELECTED, TabularSMDP
from selectq.errors import GuardError

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class TabularMDP:
    """
    An MDP with explicit arrays.

    - `states`      -- state labels, index s,
    - `actions`     -- action labels, index a,
    - `transitions` -- (S, A, S) next-state probabilities,
    - `rewards`     -- (S, A),
    - `feasible`    -- (S, A) bool,
    - `discounted`  -- (S, A) bool; False on transitions that keep the discount at 1.
    """

    states: list
    actions: list
    transitions: np.ndarray
    rewards: np.ndarray
    feasible: np.ndarray
    discounted: np.ndarray

    def __post_init__(self):
        S, A = len(self.states), len(self.actions)
        for name, shape in (("transitions", (S, A, S)), ("rewards", (S, A)), ("feasible", (S, A)), ("discounted", (S, A))):
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} has shape {getattr(self, name).shape}, expected {shape}.")
        if not self.feasible.any(axis=1).all():
            raise ValueError("Every state needs at least one feasible action.")
        self.state_index = {label: idx for idx, label in enumerate(self.states)}

    @property
    def n_states(self):
        return len(self.states)

    @property
    def n_actions(self):
        return len(self.actions)

    def discounts(self, gamma):
        """(S, A) discount applied to the value of the next state."""
        return np.where(self.discounted, gamma, 1.0)


def _guard(S, A):
    if S * A * S > TABULAR_GUARD * 10:
        raise GuardError(f"Enumerated MDP with {S} states and {A} actions exceeds the size guard.")


def build_smdp_table(smdp):
    """The Select-MDP as a TabularMDP over (joint state, joint selection)."""
    S, A = len(smdp.states), len(smdp.selections)
    _guard(S, A)
    transitions = np.zeros((S, A, S))
    rewards = np.zeros((S, A))
    for s, state in enumerate(smdp.states):
        for a, selection in enumerate(smdp.selections):
            transitions[s, a] = smdp.next_distribution(state, selection)
            rewards[s, a] = smdp.reward(state, selection)
    ones = np.ones((S, A), dtype=bool)
    return TabularMDP(list(smdp.states), list(smdp.selections), transitions, rewards, ones, ones.copy())


def _partial_selections(N, K, C):
    """Sorted pair tuples with fewer than K pairs."""
    out = [()]
    frontier = [()]
    for _ in range(K - 1):
        grown = []
        for partial in frontier:
            used = {n for n, _ in partial}
            for n in range(N):
                if n in used:
                    continue
                for c in range(C):
                    candidate = tuple(sorted(partial + ((n, c),)))
                    if candidate not in grown:
                        grown.append(candidate)
        out.extend(grown)
        frontier = grown
    return out


def build_ismdp_table(smdp):
    """
    The Iterative Select-MDP as a TabularMDP over (joint state, chosen pairs)
    with actions (item, command).
    """
    N, K, C = smdp.n_items, smdp.n_select, smdp.n_commands
    partials = _partial_selections(N, K, C)
    states = [(state, partial) for state in smdp.states for partial in partials]
    actions = [(n, c) for n in range(N) for c in range(C)]
    S, A = len(states), len(actions)
    _guard(S, A)
    index = {label: idx for idx, label in enumerate(states)}
    transitions = np.zeros((S, A, S))
    rewards = np.zeros((S, A))
    feasible = np.zeros((S, A), dtype=bool)
    discounted = np.zeros((S, A), dtype=bool)
    for s, (state, partial) in enumerate(states):
        used = {n for n, _ in partial}
        for a, (n, c) in enumerate(actions):
            if n in used:
                continue
            feasible[s, a] = True
            chosen = tuple(sorted(partial + ((n, c),)))
            if len(chosen) < K:
                transitions[s, a, index[(state, chosen)]] = 1.0
                continue
            rewards[s, a] = smdp.reward(state, chosen)
            discounted[s, a] = True
            for t, p in enumerate(smdp.next_distribution(state, chosen)):
                transitions[s, a, index[(smdp.states[t], ())]] += p
    logger.debug("Iterative table: %d phase states, %d actions", S, A)
    return TabularMDP(states, actions, transitions, rewards, feasible, discounted)


def relabel_items(label, perm):
    """
    The phase-state label (joint state, chosen pairs) with the item in slot
    `perm[n]` moved to slot n.
    """
    state, partial = label
    inverse = {old: new for new, old in enumerate(perm)}
    return tuple(state[old] for old in perm), tuple(sorted((inverse[n], c) for n, c in partial))


def ismdp_symmetry_deviation(mdp, perm):
    """
    Largest difference between a row of the Iterative Select-MDP table and the
    row of its relabelling under `perm`: transitions compare entry by entry
    with both states and the action relabelled, rewards likewise. A feasible
    action whose relabelling is infeasible counts as an infinite deviation.

    INPUT:
    - `mdp`  -- a TabularMDP from `build_ismdp_table`,
    - `perm` -- a permutation of range(N) as a sequence.
    """
    perm = tuple(perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"{perm} is not a permutation of range({len(perm)}).")
    inverse = {old: new for new, old in enumerate(perm)}
    action_index = {label: idx for idx, label in enumerate(mdp.actions)}
    states = np.array([mdp.state_index[relabel_items(label, perm)] for label in mdp.states])
    actions = np.array([action_index[(inverse[n], c)] for n, c in mdp.actions])
    if not np.array_equal(mdp.feasible, mdp.feasible[np.ix_(states, actions)]):
        return float("inf")
    transitions = np.abs(mdp.transitions - mdp.transitions[np.ix_(states, actions, states)]).max()
    rewards = np.abs(mdp.rewards - mdp.rewards[np.ix_(states, actions)]).max()
    return float(max(transitions, rewards))


def delayed_reward_smdp(seed=0):
    """
    A two-item Select-MDP on which the greedy selection is not optimal.

    Infos are 0 (fallow) and 1 (ready). Command 0 harvests: it pays 1 on a
    ready item and 0.2 on a fallow one and leaves the item fallow. Command 1
    prepares: it pays nothing and makes the item ready. Unselected items keep
    their info. One item is selected per macro step.
    """

    def reward_fn(key):
        return sum((1.0 if info == 1 else 0.2) for info, status in key if status == 0)

    def kernel_fn(key, pair):
        info, status = pair
        following = info if status == UNSELECTED else (0 if status == 0 else 1)
        return np.eye(2)[following]

    return TabularSMDP(2, 2, 2, 1, reward_fn, kernel_fn, seed=seed)
