"""
PHASE

The Iterative Select-MDP view of a Select-MDP.

A macro step of the wrapped environment is split into K phases. In phase k the
agent picks one still-unselected item n and one command c; the pair moves from
the unselected list I to the selected list X (item info followed by the one-hot
command). Phases k < K-1 are deterministic with reward 0. Phase K-1 hands the
accumulated selection to the environment, receives its reward and starts the
next macro step at phase 0.
"""

from dataclasses import dataclass

import numpy as np

from selectq.errors import InfeasibleActionError
from selectq.nets.groups import PhaseInput


@dataclass(frozen=True)
class PhaseAction:
    """A phase action (n, c): row n of the unselected list and command c."""

    n: int
    c: int


@dataclass(frozen=True, eq=False)
class PhaseState:
    """
    A state of phase k.

    - `x`         -- (k, d_I + C) selected pairs,
    - `i`         -- (N - k, d_I) unselected item infos,
    - `u`         -- (|U|, d_U) context infos,
    - `item_ids`  -- environment index of every row of `i`,
    - `selection` -- the (environment index, command) pairs chosen so far.
    """

    k: int
    K: int
    n_commands: int
    x: np.ndarray
    i: np.ndarray
    u: np.ndarray
    item_ids: tuple
    selection: tuple = ()

    @property
    def n_unselected(self):
        return self.i.shape[0]

    @property
    def is_final_phase(self):
        return self.k == self.K - 1

    @property
    def phase_input(self):
        return PhaseInput(x=self.x, i=self.i, u=self.u)


@dataclass(frozen=True, eq=False)
class PhaseTransition:
    """One IS-MDP transition. `r` is zero unless `is_final_phase`."""

    s: PhaseState
    a: PhaseAction
    r: float
    s_next: PhaseState
    is_final_phase: bool


def one_hot(c, n_commands):
    vector = np.zeros(n_commands)
    vector[c] = 1.0
    return vector


def to_phase0(items, context, K, n_commands):
    """The phase-0 state holding every item as unselected."""
    items = np.asarray(items, dtype=np.float64)
    if items.ndim != 2:
        raise InfeasibleActionError(f"Items must be a 2-D array, got shape {items.shape}.")
    context = np.asarray(context, dtype=np.float64)
    if context.size == 0:
        context = np.zeros((0, context.shape[1] if context.ndim == 2 else 0))
    if not 1 <= K <= items.shape[0]:
        raise InfeasibleActionError(f"Need 1 <= K <= N, got K={K}, N={items.shape[0]}.")
    return PhaseState(
        k=0,
        K=K,
        n_commands=n_commands,
        x=np.zeros((0, items.shape[1] + n_commands)),
        i=items,
        u=context,
        item_ids=tuple(range(items.shape[0])),
    )


def feasible_actions(s):
    """All (n, c) for the N-k unselected rows, in lexicographic order."""
    return [PhaseAction(n, c) for n in range(s.n_unselected) for c in range(s.n_commands)]


def check_action(s, a):
    if not (0 <= a.n < s.n_unselected and 0 <= a.c < s.n_commands):
        raise InfeasibleActionError(
            f"Action ({a.n}, {a.c}) is not feasible with {s.n_unselected} unselected items and {s.n_commands} commands."
        )


def advance(s, a):
    """
    Moves unselected row `a.n` with command `a.c` into X. Pure; the phase
    counter is not wrapped, so it also builds the complete selection of phase
    K-1 for agents that plan a whole macro step.
    """
    check_action(s, a)
    if s.k >= s.K:
        raise InfeasibleActionError(f"All {s.K} items are already selected.")
    pair = np.concatenate([s.i[a.n], one_hot(a.c, s.n_commands)])
    keep = np.arange(s.n_unselected) != a.n
    return PhaseState(
        k=s.k + 1,
        K=s.K,
        n_commands=s.n_commands,
        x=np.vstack([s.x, pair[None, :]]),
        i=s.i[keep],
        u=s.u,
        item_ids=tuple(n for j, n in enumerate(s.item_ids) if j != a.n),
        selection=s.selection + ((s.item_ids[a.n], a.c),),
    )


def phase_step(env, s, a):
    """
    One IS-MDP transition. Intermediate phases never touch `env`; the final
    phase calls `env.step` with the accumulated selection.
    """
    check_action(s, a)
    if not s.is_final_phase:
        return PhaseTransition(s=s, a=a, r=0.0, s_next=advance(s, a), is_final_phase=False)
    selection = s.selection + ((s.item_ids[a.n], a.c),)
    reward, items, context = env.step(list(selection))
    s_next = to_phase0(items, context, s.K, s.n_commands)
    return PhaseTransition(s=s, a=a, r=float(reward), s_next=s_next, is_final_phase=True)
