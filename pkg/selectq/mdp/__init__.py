from selectq.mdp.phase import (
    PhaseAction,
    PhaseState,
    PhaseTransition,
    advance,
    check_action,
    feasible_actions,
    one_hot,
    phase_step,
    to_phase0,
)
from selectq.mdp.smdp import AbstractSelectMDP
