"""
# SELECTQ

Iterative select Q-learning with equi-invariant, weight-shared Q-networks.

A select task asks an agent to pick K of N items and give each picked item one
of C commands. SELECTQ turns the joint choice into K phases, one item per
phase, and learns one Q-network per phase. The networks are built from layers
that share their weights across items, so a network trained on N items runs
unchanged on any other N.

SELECTQ provides:
- `selectq.matrices` -- dense matrices, Adam, seeded random streams, statistics;
- `selectq.nets` -- shared layers and networks, their dense projection, checkpoints;
- `selectq.mdp` -- the phase view of a select task;
- `selectq.envs` -- Circle Selection, Predator-Prey and small tabular tasks;
- `selectq.learner` -- the cascaded Q-learner, sharing schedules, training;
- `selectq.baselines` -- the comparison agents;
- `selectq.verification` -- exact oracles and numerical property checks;
- `selectq.harness` -- configs, evaluation, transfer, result files and the CLI.


# Philosophy

Everything is seeded. A run is a function of its JSON config, and every file a
run writes names the hash of that config.
"""

__version__ = "0.1.0"
