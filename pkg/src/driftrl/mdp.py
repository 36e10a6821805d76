"""Non-stationary tabular MDPs and exact per-slice oracles."""
from dataclasses import dataclass, field
import math

import numpy as np

from . import kernels
from .evi import EviNonConvergence, extended_value_iteration
from .sliding import ConfidenceRegionSet

NOISE_MODELS = ("deterministic", "bernoulli", "truncated-gaussian")

# aperiodicity transform used by the gain oracle: p -> a*p + (1-a)*I
_APERIODIC_MIX = 0.5


class InstanceError(ValueError):
    """Structurally malformed instance."""


class NonConvergentError(RuntimeError):
    pass


@dataclass
class StepOutcome:
    reward: float
    next_state: int


@dataclass
class GainBias:
    gain: float
    bias: np.ndarray
    policy: np.ndarray = None


@dataclass
class VariationBudgets:
    reward_budget: float
    transition_budget: float
    per_step_reward: np.ndarray = None
    per_step_transition: np.ndarray = None


@dataclass
class Violation:
    kind: str
    message: str
    fatal: bool


@dataclass
class TimeVaryingMDP:
    """Mean rewards ``(T, S, Amax)`` and transitions ``(T, S, Amax, S)``.

    Time is 1-based in the public API.  Padding actions (``a >= |A_s|``) are
    never read.  Either array may be a broadcast view when it does not vary.
    """

    num_states: int
    actions_per_state: tuple
    horizon: int
    rewards: np.ndarray
    transitions: np.ndarray
    reward_noise: str = "deterministic"
    noise_sigma: float = 1.0
    nonconforming: bool = False
    reward_bounds: tuple = (0.0, 1.0)
    initial_state: int = 0
    name: str = ""
    spec: dict = field(default=None, repr=False)

    def __post_init__(self):
        self.actions_per_state = tuple(int(a) for a in self.actions_per_state)
        self.n_actions = np.asarray(self.actions_per_state, dtype=np.int64)

    @property
    def max_actions(self):
        return int(max(self.actions_per_state))

    @property
    def num_pairs(self):
        return int(sum(self.actions_per_state))

    @property
    def mean_actions(self):
        return self.num_pairs / self.num_states

    def rewards_at(self, t):
        return self.rewards[t - 1]

    def transitions_at(self, t):
        return self.transitions[t - 1]

    def valid_mask(self):
        return np.arange(self.max_actions)[None, :] < self.n_actions[:, None]

    def mean_reward(self, t, s, a):
        return float(self.rewards[t - 1, s, a])

    def step(self, t, s, a, rng):
        return step(self, t, s, a, rng)

    @classmethod
    def from_tables(cls, rewards, transitions, actions_per_state=None, **kw):
        """Build from dense arrays; 2-D / 3-D inputs are treated as stationary.

        Stationary inputs need ``horizon`` in ``kw``.
        """
        rewards = np.asarray(rewards, dtype=np.float64)
        transitions = np.asarray(transitions, dtype=np.float64)
        if rewards.ndim == 2:
            horizon = kw.pop("horizon")
            rewards = np.broadcast_to(rewards, (horizon,) + rewards.shape)
        if transitions.ndim == 3:
            transitions = np.broadcast_to(transitions, (rewards.shape[0],) + transitions.shape)
        T, S, A = rewards.shape
        kw.pop("horizon", None)
        if actions_per_state is None:
            actions_per_state = (A,) * S
        return cls(S, tuple(actions_per_state), T, rewards, transitions, **kw)


def pad_ragged(rows, S, fill=0.0):
    """Per-state action lists to a dense array, padding missing actions."""
    A = max(len(r) for r in rows)
    first = np.asarray(rows[0][0], dtype=np.float64)
    out = np.full((S, A) + first.shape, fill, dtype=np.float64)
    for s, r in enumerate(rows):
        for a, v in enumerate(r):
            out[s, a] = v
    return out


def validate_instance(mdp, atol=1e-12):
    """Violated invariants of ``mdp`` (empty list when valid).

    Raises :class:`InstanceError` on structural problems.  Rewards outside
    [0, 1] are reported as a non-fatal ``nonconforming`` violation.
    """
    S, T = mdp.num_states, mdp.horizon
    if S < 1 or T < 1:
        raise InstanceError("num_states and horizon must be positive")
    if len(mdp.actions_per_state) != S or min(mdp.actions_per_state) < 1:
        raise InstanceError("actions_per_state must list a positive count for every state")
    A = mdp.max_actions
    if mdp.rewards.shape != (T, S, A):
        raise InstanceError(f"rewards shape {mdp.rewards.shape} != {(T, S, A)}")
    if mdp.transitions.shape != (T, S, A, S):
        raise InstanceError(f"transitions shape {mdp.transitions.shape} != {(T, S, A, S)}")
    if mdp.reward_noise not in NOISE_MODELS:
        raise InstanceError(f"unknown reward noise model {mdp.reward_noise!r}")
    if not 0 <= mdp.initial_state < S:
        raise InstanceError("initial_state out of range")
    out = []
    valid = mdp.valid_mask()
    p = mdp.transitions
    neg = (p < -atol).any(axis=-1) & valid
    if neg.any():
        t, s, a = np.argwhere(neg)[0]
        out.append(Violation("negative", f"negative transition probability at t={t + 1}, s={s}, a={a}", True))
    sums = p.sum(axis=-1)
    bad = (np.abs(sums - 1.0) > atol) & valid
    if bad.any():
        t, s, a = np.argwhere(bad)[0]
        out.append(Violation("row sum", f"transition row sums to {sums[t, s, a]:.6g} at t={t + 1}, s={s}, a={a}", True))
    r = np.where(valid, mdp.rewards, 0.5)
    if not np.isfinite(r).all():
        out.append(Violation("reward", "non-finite mean reward", True))
    elif (r < 0).any() or (r > 1).any():
        t, s, a = np.argwhere((r < 0) | (r > 1))[0]
        out.append(Violation("nonconforming", f"mean reward {r[t, s, a]:.6g} outside [0,1] at t={t + 1}, s={s}, a={a}", False))
    return out


def optimal_gain(rewards, transitions, n_actions=None, tolerance=1e-6, max_iterations=1_000_000):
    """Optimal average reward of one stationary slice, with a normalised bias.

    Relative value iteration on the aperiodic transform ``0.5 p + 0.5 I``,
    which leaves the gain unchanged; the returned bias is rescaled back so it
    satisfies the untransformed optimality inequalities.
    """
    rewards = np.asarray(rewards, dtype=np.float64)
    transitions = np.asarray(transitions, dtype=np.float64)
    S = rewards.shape[0]
    mixed = _APERIODIC_MIX * transitions + (1.0 - _APERIODIC_MIX) * np.eye(S)[:, None, :]
    regions = ConfidenceRegionSet.point(rewards, mixed, n_actions)
    try:
        res = extended_value_iteration(regions, tolerance, max_iterations)
    except EviNonConvergence as exc:
        raise NonConvergentError("non-convergent (possibly non-communicating)") from exc
    bias = _APERIODIC_MIX * res.bias
    return GainBias(res.gain, bias - bias.min(), res.policy)


def oracle_gains(mdp, tolerance=1e-6):
    """rho*_t for every t, solving each distinct slice once."""
    cache = {}
    out = np.empty(mdp.horizon)
    for t in range(1, mdp.horizon + 1):
        r, p = mdp.rewards_at(t), mdp.transitions_at(t)
        key = r.tobytes() + p.tobytes()
        if key not in cache:
            cache[key] = optimal_gain(r, p, mdp.n_actions, tolerance).gain
        out[t - 1] = cache[key]
    return out


def _proper_states(p, n_actions, target):
    """States from which some policy reaches ``target`` with probability one.

    Also returns the mask of actions whose support stays inside that set.
    """
    S, A, _ = p.shape
    valid = np.arange(A)[None, :] < n_actions[:, None]
    alive = np.ones(S, dtype=bool)
    while True:
        allowed = valid & ~((p > 0) & ~alive[None, None, :]).any(axis=-1)
        edge = ((p > 0) & allowed[..., None]).any(axis=1)
        reach = np.zeros(S, dtype=bool)
        reach[target] = True
        while True:
            new = reach | (edge & reach[None, :]).any(axis=1)
            new &= alive
            if np.array_equal(new, reach):
                break
            reach = new
        if np.array_equal(reach, alive):
            return alive, allowed
        alive = reach


def hitting_times(transitions, target, n_actions=None, tol=1e-9, max_iterations=1_000_000):
    """Minimal expected hitting times of ``target`` from every state.

    Value iteration followed by exact policy evaluation/improvement, so the
    result is exact up to linear-solve rounding.  States that cannot reach
    the target almost surely get ``inf``.
    """
    p = np.asarray(transitions, dtype=np.float64)
    S, A, _ = p.shape
    if n_actions is None:
        n_actions = np.full(S, A, dtype=np.int64)
    n_actions = np.asarray(n_actions, dtype=np.int64)
    alive, allowed = _proper_states(p, n_actions, target)
    if not alive.all():
        # forbidden actions become self-loops, which are never optimal
        q = p.copy()
        for s, a in zip(*np.nonzero(~allowed)):
            q[s, a] = 0.0
            q[s, a, s] = 1.0
        q[~alive] = 0.0
        q[~alive, :, target] = 1.0
        p = q
    h, _, converged = kernels.ssp_sweeps(p, n_actions, int(target), float(tol), int(max_iterations))
    if not converged:
        h = np.full(S, math.inf)
        h[target] = 0.0
        return h
    h = _polish_hitting(p, n_actions, target, h)
    h[~alive] = math.inf
    return h


def _polish_hitting(p, n_actions, target, h):
    S, A, _ = p.shape
    valid = np.arange(A)[None, :] < n_actions[:, None]
    others = np.array([s for s in range(S) if s != target])
    if others.size == 0:
        return h
    best = h
    policy = None
    for _ in range(100):
        q = np.where(valid, 1.0 + p @ best, np.inf)
        new_policy = q.argmin(axis=1)
        if policy is not None:
            # keep the incumbent action unless strictly improved
            keep = q[np.arange(S), policy] <= q[np.arange(S), new_policy] + 1e-13
            new_policy = np.where(keep, policy, new_policy)
            if np.array_equal(new_policy, policy):
                break
        policy = new_policy
        P = p[others, policy[others]][:, others]
        M = np.eye(others.size) - P
        try:
            sol = np.linalg.solve(M, np.ones(others.size))
        except np.linalg.LinAlgError:
            return best
        if not np.all(np.isfinite(sol)) or np.any(sol < 0):
            return best
        cand = np.zeros(S)
        cand[others] = sol
        best = cand
    return best


def diameter(transitions, n_actions=None, tol=1e-9, max_iterations=1_000_000):
    """max over ordered pairs s != s' of the minimal expected time from s to s'.

    Returns ``math.inf`` for non-communicating slices.
    """
    p = np.asarray(transitions, dtype=np.float64)
    S = p.shape[0]
    if S == 1:
        return 0.0
    worst = 0.0
    for target in range(S):
        h = hitting_times(p, target, n_actions, tol, max_iterations)
        worst = max(worst, float(np.max(h)))
        if math.isinf(worst):
            return math.inf
    return worst


def region_diameter(center, budget, n_actions=None, tol=1e-9, max_iterations=1_000_000):
    """Smallest diameter reachable by choosing, per pair, any row in its L1 ball.

    Hitting times of the most favourable model: ``h(s) = 1 + min_a min_p p.h``.
    """
    center = np.asarray(center, dtype=np.float64)
    budget = np.broadcast_to(np.asarray(budget, dtype=np.float64), center.shape[:-1])
    S, A, _ = center.shape
    if n_actions is None:
        n_actions = np.full(S, A, dtype=np.int64)
    valid = np.arange(A)[None, :] < np.asarray(n_actions)[:, None]
    if S == 1:
        return 0.0
    worst = 0.0
    for target in range(S):
        h = np.zeros(S)
        for _ in range(max_iterations):
            rows = kernels.optimistic_rows(-h, center, budget)
            q = np.where(valid, 1.0 + rows @ h, np.inf)
            nxt = q.min(axis=1)
            nxt[target] = 0.0
            change = np.max(np.abs(nxt - h))
            h = nxt
            if change <= tol:
                break
            if h.max() > 1e12:
                return math.inf
        else:
            return math.inf
        # exact evaluation of the final optimistic model
        rows = kernels.optimistic_rows(-h, center, budget)
        h = hitting_times(rows, target, n_actions, tol, max_iterations)
        worst = max(worst, float(h.max()))
    return worst


def variation_budgets(mdp):
    """Total sup-norm reward variation and L1 transition variation over time."""
    if mdp.horizon < 2:
        raise ValueError("variation budgets need T >= 2")
    valid = mdp.valid_mask()
    dr = np.abs(np.diff(mdp.rewards, axis=0))
    per_r = np.where(valid, dr, 0.0).reshape(mdp.horizon - 1, -1).max(axis=1)
    dp = np.abs(np.diff(mdp.transitions, axis=0)).sum(axis=-1)
    per_p = np.where(valid, dp, 0.0).reshape(mdp.horizon - 1, -1).max(axis=1)
    return VariationBudgets(float(per_r.sum()), float(per_p.sum()), per_r, per_p)


def _noise(mdp, mean, rng):
    kind = mdp.reward_noise
    if kind == "deterministic":
        return mean
    if kind == "bernoulli":
        return float(rng.random() < mean)
    # symmetric truncation keeps the mean; stays in [0,1] for conforming means
    half = min(mean, 1.0 - mean) if 0.0 <= mean <= 1.0 else 2.0 * mdp.noise_sigma
    if half <= 0.0:
        return mean
    sigma = mdp.noise_sigma
    while True:
        z = rng.normal(0.0, sigma)
        if abs(z) <= half:
            return mean + z


def step(mdp, t, s, a, rng):
    """Sample reward and next state of pair ``(s, a)`` at time ``t``."""
    if not 1 <= t <= mdp.horizon:
        raise IndexError(f"time {t} outside [1, {mdp.horizon}]")
    if not 0 <= s < mdp.num_states or not 0 <= a < mdp.actions_per_state[s]:
        raise IndexError(f"invalid state-action pair ({s}, {a})")
    row = mdp.transitions[t - 1, s, a]
    nxt = int(np.searchsorted(np.cumsum(row), rng.random(), side="right"))
    nxt = min(nxt, mdp.num_states - 1)
    mean = float(mdp.rewards[t - 1, s, a])
    return StepOutcome(_noise(mdp, mean, rng), nxt)
