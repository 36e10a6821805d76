"""Bandit-over-RL: EXP3.P picks (window, widening) for each block."""
from dataclasses import dataclass
import math

import numpy as np

from .exp3p import Exp3pState, exp3p_select, exp3p_update
from .swucrl2cw import default_delta, model_of, run_segment
from .trace import Block, Recorder


@dataclass
class BorlGrid:
    block_length: int
    phi: float
    delta_w: int
    delta_eta: int
    windows: np.ndarray
    widenings: np.ndarray

    @property
    def size(self):
        return (self.delta_w + 1) * (self.delta_eta + 1)

    def cell(self, arm):
        return divmod(arm, self.delta_eta + 1)

    def params(self, arm):
        j, k = self.cell(arm)
        return int(self.windows[j]), float(self.widenings[k])

    @classmethod
    def create(cls, S, A, T):
        H = math.floor(3 * S ** (2 / 3) * A ** 0.5 * T ** 0.5)
        H = min(max(H, 1), T)
        phi = 1.0 / (2.0 * math.sqrt(T))
        dw = max(math.floor(math.log(H)), 1)
        de = max(math.floor(math.log(1.0 / phi)), 1)
        windows = np.array([math.floor(H ** (j / dw)) for j in range(dw + 1)], dtype=np.int64)
        widenings = S ** (1 / 3) * A ** 0.25 * phi ** (np.arange(de + 1) / de)
        return cls(H, phi, dw, de, windows, widenings)


def scale_block_reward(total, length, block_length, bounds):
    """Map a block's total reward into [0, 1].

    Rewards are first shifted and scaled by their declared range, then the
    sum is clamped to [0, H] and divided by H.
    """
    lo, hi = bounds
    span = (hi - lo) or 1.0
    mapped = (total - length * lo) / span
    return min(max(mapped, 0.0), block_length) / block_length


def run_borl(env, rng, delta=None, on_episode=None):
    mdp = model_of(env)
    S, A, T = mdp.num_states, mdp.mean_actions, mdp.horizon
    delta = delta or default_delta(T)
    grid = BorlGrid.create(S, A, T)
    H = grid.block_length
    n_blocks = math.ceil(T / H)
    master = Exp3pState.create(grid.size, n_blocks)
    rec = Recorder(T)
    s = mdp.initial_state
    for i in range(n_blocks):
        start = i * H + 1
        length = min(H, T - i * H)
        arm, u = exp3p_select(master, rng)
        window, widening = grid.params(arm)
        s = run_segment(env, start, length, window, widening, delta, rng, rec, s,
                        log_horizon=T, on_episode=on_episode)
        total = float(rec.rewards[start - 1:start - 1 + length].sum())
        scaled = scale_block_reward(total, length, H, mdp.reward_bounds)
        exp3p_update(master, arm, scaled, u)
        rec.blocks.append(Block(i, start, start + length - 1, grid.cell(arm), window, widening,
                                u, total, scaled))
    return rec.finish("borl", {"block_length": H, "grid_size": grid.size, "delta": delta,
                               "alpha": master.alpha, "beta": master.beta,
                               "gamma": master.gamma, "gamma_raw": master.gamma_raw})
