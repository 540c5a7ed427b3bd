from selectq.verification.equivalence import check_equivalence, check_myopic_gap, compare_tables, myopic_policy_values
from selectq.verification.properties import (
    check_ei,
    check_gradients,
    check_loss_invariance,
    check_theorem1_projection,
    permutation_group,
)
from selectq.verification.reports import CheckReport
from selectq.verification.solvers import QTable, finite_horizon_values, policy_evaluation, value_iteration
from selectq.verification.suites import SUITES, run_suite
from selectq.verification.tables import TabularMDP, build_ismdp_table, build_smdp_table, delayed_reward_smdp
from selectq.verification.universality import check_universality_fit
