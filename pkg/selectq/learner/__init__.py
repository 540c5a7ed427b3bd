from selectq.learner.agents import Agent, QAgent, RandomAgent, greedy_action, select_action, uniform_action
from selectq.learner.cascade import CascadedQ
from selectq.learner.config import TrainConfig, epsilon
from selectq.learner.kernels import DenseKernel, SharedKernel
from selectq.learner.losses import bootstrap_values, phase_loss, phase_targets
from selectq.learner.replay import ReplayBuffer, ReplayChain
from selectq.learner.sharing import SharingMode, set_count, sharing_groups, split_schedule
from selectq.learner.train import make_isq_agent, reset_env, shared_kernel, train
