"""EXP3.P master over a finite set of arms."""
from dataclasses import dataclass, field
import math

import numpy as np


@dataclass
class Exp3pState:
    n_arms: int
    alpha: float
    beta: float
    gamma: float
    gamma_raw: float      # before clamping to 1
    q: np.ndarray = field(repr=False)
    round: int = 1

    @classmethod
    def create(cls, n_arms, n_rounds):
        """Learning rates for ``n_arms`` arms played for ``n_rounds`` rounds."""
        if n_arms < 2:
            raise ValueError("EXP3.P needs at least two arms")
        base = math.log(n_arms) / (n_arms * n_rounds)
        gamma = 1.05 * math.sqrt(n_arms * math.log(n_arms) / n_rounds)
        return cls(n_arms, 0.95 * math.sqrt(base), math.sqrt(base), min(1.0, gamma), gamma,
                   np.zeros(n_arms))


def exp3p_probabilities(state):
    z = state.alpha * state.q
    w = np.exp(z - z.max())
    return (1.0 - state.gamma) * w / w.sum() + state.gamma / state.n_arms


def exp3p_select(state, rng):
    u = exp3p_probabilities(state)
    arm = int(np.searchsorted(np.cumsum(u), rng.random() * u.sum(), side="right"))
    return min(arm, state.n_arms - 1), u


def exp3p_update(state, arm, reward, u):
    """``reward`` must already lie in [0, 1]."""
    if not 0.0 <= reward <= 1.0:
        raise ValueError("reward must lie in [0, 1]")
    inc = state.beta / u
    inc[arm] += reward / u[arm]
    state.q = state.q + inc
    state.round += 1
    return state
