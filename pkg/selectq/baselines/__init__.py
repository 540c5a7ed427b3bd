from selectq.baselines.eq import eq_forward, make_eq_agent
from selectq.baselines.heuristic import HeuristicAgent, heuristic_choice, make_heuristic_agent
from selectq.baselines.idqn import IDQNAgent, idqn_policy, make_idqn_agent
from selectq.baselines.kinds import BaselineKind, make_agent, prepare_env
from selectq.baselines.myopic import MyopicAgent, make_myopic_agent, myopic_loss
from selectq.baselines.rsq import RSQAgent, make_rsq_agent, rsq_policy
from selectq.baselines.sorting import SortedItems, sort_items
from selectq.baselines.vanilla import make_vanilla_agent, vanilla_forward, vanilla_kernel
