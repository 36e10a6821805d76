"""Per-step records of one simulated run."""
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Episode:
    index: int
    start: int          # global time of the first step
    end: int            # global time of the last step
    reason: str         # "window", "doubling" or "horizon"
    window: int
    widening: float
    epsilon: float
    gain: float
    policy: tuple
    visits: np.ndarray = field(repr=False)   # nu at the end of the episode
    n_plus: np.ndarray = field(repr=False)   # N+ at the episode start
    trigger: tuple = None                     # pair that fired the doubling test
    retried: bool = False

    @property
    def length(self):
        return self.end - self.start + 1


@dataclass
class Block:
    index: int
    start: int
    end: int
    cell: tuple
    window: int
    widening: float
    probabilities: np.ndarray = field(repr=False)
    reward: float = 0.0
    scaled_reward: float = 0.0


class Recorder:
    """Preallocated arrays filled one step at a time."""

    def __init__(self, horizon):
        self.states = np.zeros(horizon, dtype=np.int64)
        self.actions = np.zeros(horizon, dtype=np.int64)
        self.rewards = np.zeros(horizon)
        self.mean_rewards = np.zeros(horizon)
        self.episodes = []
        self.blocks = []

    def record(self, t, s, a, reward, mean_reward):
        i = t - 1
        self.states[i] = s
        self.actions[i] = a
        self.rewards[i] = reward
        self.mean_rewards[i] = mean_reward

    def finish(self, algorithm, params):
        return RegretTrace(algorithm, self.states, self.actions, self.rewards,
                           self.mean_rewards, self.episodes, self.blocks, params)


@dataclass
class RegretTrace:
    algorithm: str
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    mean_rewards: np.ndarray
    episodes: list = field(default_factory=list, repr=False)
    blocks: list = field(default_factory=list, repr=False)
    params: dict = field(default_factory=dict)
    oracle_gains: np.ndarray = field(default=None, repr=False)

    def __len__(self):
        return len(self.states)

    @property
    def cumulative_reward(self):
        return np.cumsum(self.mean_rewards)

    @property
    def cumulative_realized_reward(self):
        return np.cumsum(self.rewards)

    def regret(self):
        if self.oracle_gains is None:
            raise ValueError("oracle gains not attached")
        return self.oracle_gains - self.mean_rewards

    @property
    def cumulative_regret(self):
        return np.cumsum(self.regret())
