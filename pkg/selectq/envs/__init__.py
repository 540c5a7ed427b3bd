from selectq.envs.circles import Circle, CircleConfig, CircleSelection, cs_reward
from selectq.envs.features import featurize, featurize_circles, featurize_grid
from selectq.envs.predator_prey import PPConfig, PredatorPrey, caught_preys, move_on_grid
from selectq.envs.tabular import (
    TabularConfig,
    TabularSMDP,
    canonical_key,
    joint_selections,
    tabular_from_config,
    tabular_random,
)
