"""
EQ

Element-wise Q values: the shared network with every pooled weight held at
zero, so row j of the QMatrix is a function of item j's features alone.
"""

from selectq.learner.train import make_isq_agent
from selectq.nets.network import network_forward, zero_pooled


def eq_forward(theta, s):
    """QMatrix of `theta` with its pooled weights forced to zero."""
    if not theta.local_only:
        theta = zero_pooled(theta)
    return network_forward(theta, s)


def make_eq_agent(cfg, env, mode, rng):
    agent = make_isq_agent(cfg, env, mode, rng, local_only=True)
    agent.name = "eq"
    return agent
