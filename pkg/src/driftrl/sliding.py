"""Sliding-window counts and confidence regions for rewards and transitions."""
from collections import deque
from dataclasses import dataclass, field
import math

import numpy as np


@dataclass
class Counts:
    """Window statistics per state-action pair."""

    n: np.ndarray
    reward_sum: np.ndarray
    transition_count: np.ndarray

    @property
    def n_plus(self):
        return np.maximum(self.n, 1)


class WindowBuffer:
    """Ring buffer over the last ``window`` transitions.

    Integer counts are maintained incrementally; reward sums are recomputed
    from the retained entries on query so that they never accumulate
    floating-point drift from evictions.
    """

    def __init__(self, window, num_states, max_actions):
        if window < 1:
            raise ValueError("window must be a positive integer")
        self.window = int(window)
        self.num_states = num_states
        self.max_actions = max_actions
        self.entries = deque()
        self._n = np.zeros((num_states, max_actions), dtype=np.int64)
        self._trans = np.zeros((num_states, max_actions, num_states), dtype=np.int64)
        self._last_t = 0

    def record(self, t, s, a, reward, next_state):
        if t <= self._last_t:
            raise ValueError(f"non-monotone time: got t={t} after t={self._last_t}")
        self._last_t = t
        self.entries.append((t, s, a, reward, next_state))
        self._n[s, a] += 1
        self._trans[s, a, next_state] += 1

    def _evict(self, t):
        cutoff = t - self.window
        entries = self.entries
        while entries and entries[0][0] < cutoff:
            _, s, a, _, nxt = entries.popleft()
            self._n[s, a] -= 1
            self._trans[s, a, nxt] -= 1

    def counts(self, t):
        """Statistics over steps ``[max(t - W, 1), t - 1]``."""
        self._evict(t)
        rsum = np.zeros((self.num_states, self.max_actions))
        if self.entries:
            _, s, a, r, _ = zip(*self.entries)
            np.add.at(rsum, (np.array(s), np.array(a)), np.array(r, dtype=np.float64))
        return Counts(self._n.copy(), rsum, self._trans.copy())


def counts_from_trajectory(states, actions, rewards, next_states, t, window,
                           num_states, max_actions, start_time=1):
    """Rebuild window counts from scratch; reference for the incremental buffer."""
    n = np.zeros((num_states, max_actions), dtype=np.int64)
    rsum = np.zeros((num_states, max_actions))
    trans = np.zeros((num_states, max_actions, num_states), dtype=np.int64)
    lo = max(t - window, 1)
    for i, (s, a, r, nxt) in enumerate(zip(states, actions, rewards, next_states)):
        q = start_time + i
        if lo <= q <= t - 1:
            n[s, a] += 1
            rsum[s, a] += r
            trans[s, a, nxt] += 1
    return Counts(n, rsum, trans)


@dataclass
class ConfidenceRegionSet:
    """Reward intervals and widened L1 transition balls at one episode start.

    A transition center that is the zero vector (no samples) stands for the
    whole simplex.
    """

    reward_center: np.ndarray
    reward_radius: np.ndarray
    transition_center: np.ndarray
    transition_radius: np.ndarray
    n_actions: np.ndarray
    widening: float = 0.0
    delta: float = 0.05
    reward_bounds: tuple = (0.0, 1.0)
    counts: Counts = field(default=None, repr=False)

    @property
    def num_states(self):
        return self.transition_center.shape[0]

    @property
    def transition_budget(self):
        return self.transition_radius + self.widening

    def reward_upper(self):
        return np.minimum(self.reward_bounds[1], self.reward_center + self.reward_radius)

    def reward_interval(self, s, a):
        lo, hi = self.reward_bounds
        c, r = self.reward_center[s, a], self.reward_radius[s, a]
        return max(lo, c - r), min(hi, c + r)

    def contains_reward(self, s, a, value, tol=0.0):
        lo, hi = self.reward_interval(s, a)
        return lo - tol <= value <= hi + tol

    def contains_transition(self, s, a, p, eta=None, tol=1e-12):
        eta = self.widening if eta is None else eta
        p = np.asarray(p, dtype=np.float64)
        if np.any(p < -tol) or abs(p.sum() - 1.0) > 1e-9:
            return False
        dist = np.abs(p - self.transition_center[s, a]).sum()
        return dist <= self.transition_radius[s, a] + eta + tol

    def with_widening(self, eta):
        return ConfidenceRegionSet(
            self.reward_center, self.reward_radius, self.transition_center,
            self.transition_radius, self.n_actions, eta, self.delta,
            self.reward_bounds, self.counts)

    @classmethod
    def point(cls, rewards, transitions, n_actions=None, reward_bounds=(-np.inf, np.inf)):
        """Degenerate regions pinned at a known model (exact planning)."""
        rewards = np.asarray(rewards, dtype=np.float64)
        transitions = np.asarray(transitions, dtype=np.float64)
        S, A = rewards.shape
        if n_actions is None:
            n_actions = np.full(S, A, dtype=np.int64)
        return cls(rewards, np.zeros((S, A)), transitions, np.zeros((S, A)),
                   np.asarray(n_actions, dtype=np.int64), 0.0, 1.0, reward_bounds)

    def to_dict(self):
        valid = np.arange(self.reward_center.shape[1])[None, :] < self.n_actions[:, None]
        out = []
        for s, a in zip(*np.nonzero(valid)):
            out.append({
                "s": int(s), "a": int(a),
                "reward_center": float(self.reward_center[s, a]),
                "reward_radius": float(self.reward_radius[s, a]),
                "transition_center": [float(x) for x in self.transition_center[s, a]],
                "transition_radius": float(self.transition_radius[s, a]),
            })
        return {"widening": float(self.widening), "delta": float(self.delta), "pairs": out}


def log_term(num_pairs, horizon, delta):
    # num_pairs = S * A with A the mean number of actions per state
    return math.log(num_pairs * horizon / delta)


def build_regions(buffer, t, delta, eta, S, A, T, n_actions=None, reward_bounds=(0.0, 1.0)):
    """Confidence regions from the window ending just before ``t``.

    ``buffer`` may be a :class:`WindowBuffer` or precomputed :class:`Counts`.
    ``A`` is the mean action count, so ``S * A`` is the number of pairs.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if eta < 0:
        raise ValueError("eta must be non-negative")
    counts = buffer.counts(t) if isinstance(buffer, WindowBuffer) else buffer
    n_plus = counts.n_plus.astype(np.float64)
    if n_actions is None:
        n_actions = np.full(counts.n.shape[0], counts.n.shape[1], dtype=np.int64)
    ell = log_term(S * A, T, delta)
    rad_r = 2.0 * np.sqrt(2.0 * ell / n_plus)
    rad_p = 2.0 * np.sqrt(2.0 * S * ell / n_plus)
    r_hat = counts.reward_sum / n_plus
    p_hat = counts.transition_count / n_plus[..., None]
    return ConfidenceRegionSet(r_hat, rad_r, p_hat, rad_p, np.asarray(n_actions, dtype=np.int64),
                               float(eta), float(delta), tuple(reward_bounds), counts)
