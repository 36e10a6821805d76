"""Two-state instance with sinusoidally drifting rewards and transitions."""
from dataclasses import dataclass
import math

import numpy as np

from ..mdp import TimeVaryingMDP

_LO, _HI = 0.2 - 3.0, 0.2 + 3.0


@dataclass
class DriftingConfig:
    horizon: int = 5000
    reward_scale: float = 1.0      # V_r
    transition_scale: float = 1.0  # V_p
    rescale: bool = False

    def __post_init__(self):
        if self.reward_scale <= 0 or self.transition_scale <= 0:
            raise ValueError("variation scales must be positive")


def reward_wave(config, t):
    return np.cos(5.0 * config.reward_scale * math.pi * np.asarray(t, dtype=np.float64) / config.horizon)


def beta(config, t):
    return 0.5 + 0.3 * np.sin(5.0 * config.transition_scale * math.pi * np.asarray(t, dtype=np.float64) / config.horizon)


def drifting_env(config):
    """States s1, s2 (indices 0, 1); actions a1, a2 (indices 0, 1).

    a1 keeps the state; a2 switches state with probability beta_t.  Rewards
    leave [0, 1] unless ``config.rescale`` maps them affinely into it.
    """
    T = config.horizon
    t = np.arange(1, T + 1)
    c = reward_wave(config, t)
    b = beta(config, t)
    r = np.empty((T, 2, 2))
    r[:, 0, 0] = 0.2 + 3.0 * c
    r[:, 0, 1] = 0.2 + c
    r[:, 1, 0] = 0.2 - c
    r[:, 1, 1] = 0.2 - 3.0 * c
    p = np.zeros((T, 2, 2, 2))
    p[:, 0, 0, 0] = 1.0
    p[:, 0, 1, 0] = 1.0 - b
    p[:, 0, 1, 1] = b
    p[:, 1, 0, 1] = 1.0
    p[:, 1, 1, 0] = b
    p[:, 1, 1, 1] = 1.0 - b
    bounds = (_LO, _HI)
    if config.rescale:
        r = (r - _LO) / (_HI - _LO)
        bounds = (0.0, 1.0)
    spec = {"generator": "drifting", "params": {
        "horizon": T, "reward_scale": config.reward_scale,
        "transition_scale": config.transition_scale, "rescale": config.rescale}}
    return TimeVaryingMDP(
        2, (2, 2), T, r, p, reward_noise="deterministic",
        nonconforming=not config.rescale, reward_bounds=bounds,
        name=f"drifting(Vr={config.reward_scale:.4g},Vp={config.transition_scale:.4g})",
        spec=spec)


def drift_scenarios(horizon=5000):
    """The four (V_r, V_p) combinations from {T^0.2, T^0.5}^2."""
    lo, hi = horizon ** 0.2, horizon ** 0.5
    out = {}
    for rn, vr in (("0.2", lo), ("0.5", hi)):
        for pn, vp in (("0.2", lo), ("0.5", hi)):
            out[f"Vr=T^{rn},Vp=T^{pn}"] = DriftingConfig(horizon, vr, vp)
    return out
