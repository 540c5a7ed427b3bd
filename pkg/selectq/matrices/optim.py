"""
OPTIM

Adam with bias correction on flat parameter vectors. `adam_step` is pure: it
returns new parameters and a new `AdamState` and never mutates its inputs.
"""

from dataclasses import dataclass, replace

import numpy as np

from selectq.constants import ADAM_BETA1, ADAM_BETA2, ADAM_EPS, ADAM_LR
from selectq.errors import NonFiniteError, ShapeError


@dataclass(frozen=True, eq=False)
class AdamState:
    """First and second moments, step counter and hyperparameters."""

    m: np.ndarray
    v: np.ndarray
    t: int = 0
    lr: float = ADAM_LR
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    eps: float = ADAM_EPS

    def __post_init__(self):
        if self.m.shape != self.v.shape:
            raise ShapeError(f"Moment shapes differ: {self.m.shape} vs {self.v.shape}.")
        if self.t < 0:
            raise ValueError(f"Step counter must be non-negative, got {self.t}.")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError(f"Decay rates must lie in [0, 1), got {self.beta1}, {self.beta2}.")

    @classmethod
    def zeros(cls, size, **kwargs):
        return cls(m=np.zeros(size), v=np.zeros(size), **kwargs)

    def copy(self):
        return replace(self, m=self.m.copy(), v=self.v.copy())


def adam_step(params, grads, state):
    """
    One Adam update. Returns `(params', state')` with `state'.t == state.t + 1`.

    Raises `NonFiniteError` if any gradient is NaN or infinite.
    """
    params = np.asarray(params, dtype=np.float64)
    grads = np.asarray(grads, dtype=np.float64)
    if params.shape != grads.shape or params.shape != state.m.shape:
        raise ShapeError(
            f"Parameter, gradient and moment shapes differ: {params.shape}, {grads.shape}, {state.m.shape}."
        )
    if not np.all(np.isfinite(grads)):
        raise NonFiniteError("Gradient contains NaN or infinite entries; training halted.")

    t = state.t + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * grads
    v = state.beta2 * state.v + (1.0 - state.beta2) * (grads * grads)
    m_hat = m / (1.0 - state.beta1**t)
    v_hat = v / (1.0 - state.beta2**t)
    new_params = params - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return new_params, replace(state, m=m, v=v, t=t)
