"""
MYOPIC

The cascaded learner without discounting of the future: the final phase
regresses onto the immediate reward alone while the intermediate phases still
bootstrap from the next phase.
"""

from selectq.learner.agents import QAgent
from selectq.learner.losses import phase_loss
from selectq.learner.train import shared_kernel


def myopic_loss(chains, cascade):
    """`phase_loss` with gamma = 0."""
    return phase_loss(chains, cascade, 0.0)


class MyopicAgent(QAgent):
    """A QAgent that maximises the reward of the current macro step."""

    name = "myopic"

    def __init__(self, kernel, K, mode, rng, lr):
        super().__init__(kernel, K, mode, rng, 0.0, lr)

    def losses(self, chains):
        return myopic_loss(chains, self.nets)


def make_myopic_agent(cfg, env, mode, rng):
    return MyopicAgent(shared_kernel(cfg, env), env.n_select, mode, rng, cfg.lr)
