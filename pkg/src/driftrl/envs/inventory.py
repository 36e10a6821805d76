"""Single-product inventory control with lost sales and censored demand.

Stock levels are 0..capacity.  At stock ``s`` the order quantity is
0..capacity-s.  Only ``min(X, s + a)`` of the demand ``X`` is observed, so the
agent learns from a pseudo-reward that differs from the negated cost by
``l * X``, a quantity that does not depend on the policy.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from ..mdp import StepOutcome, TimeVaryingMDP


@dataclass
class InventoryConfig:
    capacity: int = 5
    horizon: int = 1000
    fixed_cost: float = 0.5      # f
    unit_cost: float = 0.2       # c
    lost_sale_cost: float = 1.0  # l
    holding_cost: float = 0.1    # h
    floor: float = 0.02          # zeta
    cycles: float = 2.0
    demand: np.ndarray = field(default=None, repr=False)  # (T, capacity+1) pmf table

    def __post_init__(self):
        S = self.capacity
        if S < 1 or self.horizon < 1:
            raise ValueError("capacity and horizon must be positive")
        if min(self.fixed_cost, self.unit_cost, self.lost_sale_cost, self.holding_cost) < 0:
            raise ValueError("costs must be non-negative")
        if not 0.0 < self.floor <= 1.0 / (S + 1):
            raise ValueError("floor must lie in (0, 1/(capacity+1)]")
        self.generated_demand = self.demand is None
        if self.demand is None:
            self.demand = default_demand(S, self.horizon, self.floor, self.cycles)
        else:
            d = np.asarray(self.demand, dtype=np.float64)
            if d.ndim == 1:
                d = np.broadcast_to(d, (self.horizon, d.size))
            if d.shape != (self.horizon, S + 1):
                raise ValueError(f"demand table must have shape {(self.horizon, S + 1)}")
            if np.abs(d.sum(axis=1) - 1.0).max() > 1e-9:
                raise ValueError("demand rows must be probability vectors")
            if d.min() < self.floor - 1e-12:
                raise ValueError(f"demand pmf drops below the floor {self.floor} (min {d.min():.4g})")
            self.demand = d


def default_demand(capacity, horizon, floor, cycles):
    """Slowly alternating mix of a low-demand and a high-demand pmf.

    ``floor + (1 - (capacity+1) floor) * mixture`` keeps every entry at least
    ``floor`` and each row summing to one.
    """
    x = np.arange(capacity + 1)
    low = 0.5 ** x
    low /= low.sum()
    high = low[::-1].copy()
    t = np.arange(1, horizon + 1)
    w = 0.5 + 0.5 * np.sin(2.0 * math.pi * cycles * t / horizon)
    mix = w[:, None] * low[None, :] + (1.0 - w[:, None]) * high[None, :]
    return floor + (1.0 - (capacity + 1) * floor) * mix


def _pseudo(config, s, a, x):
    y = s + a
    sold = min(x, y)
    return (-config.fixed_cost * (a > 0) - config.unit_cost * a
            - config.holding_cost * (y - sold) + config.lost_sale_cost * sold)


def _raw(config, s, a, x):
    y = s + a
    return -(config.fixed_cost * (a > 0) + config.unit_cost * a
             + config.lost_sale_cost * max(x - y, 0) + config.holding_cost * max(y - x, 0))


def reward_range(config, kind="pseudo"):
    """Exact min and max of the realised reward over every (s, a, X)."""
    fn = _pseudo if kind == "pseudo" else _raw
    S = config.capacity
    vals = [fn(config, s, a, x) for s in range(S + 1) for a in range(S - s + 1) for x in range(S + 1)]
    return min(vals), max(vals)


def expected_demand(config):
    return config.demand @ np.arange(config.capacity + 1)


def inventory_mdp(config, kind="pseudo", normalize=True):
    """Tabular form with mean rewards; ``kind`` is ``pseudo`` or ``raw``.

    With ``normalize`` the reward is mapped affinely into [0, 1] using the
    exact range of the chosen kind.
    """
    if kind not in ("pseudo", "raw"):
        raise ValueError("kind must be 'pseudo' or 'raw'")
    S, T = config.capacity, config.horizon
    n = S + 1
    fn = _pseudo if kind == "pseudo" else _raw
    table = np.zeros((n, n, n))  # (s, a, x) realised reward
    for s in range(n):
        for a in range(n - s):
            for x in range(n):
                table[s, a, x] = fn(config, s, a, x)
    # next state given (s, a, x) is max(s + a - x, 0)
    nxt = np.zeros((n, n, n), dtype=np.int64)
    for s in range(n):
        for a in range(n - s):
            for x in range(n):
                nxt[s, a, x] = max(s + a - x, 0)
    d = config.demand
    rewards = np.einsum("tx,sax->tsa", d, table)
    onehot = np.eye(n)[nxt]  # (s, a, x, s')
    transitions = np.einsum("tx,saxk->tsak", d, onehot)
    for s in range(n):
        transitions[:, s, n - s:] = 0.0
        rewards[:, s, n - s:] = 0.0
    lo, hi = reward_range(config, kind)
    bounds = (lo, hi)
    if normalize:
        scale = hi - lo if hi > lo else 1.0
        rewards = (rewards - lo) / scale
        for s in range(n):
            rewards[:, s, n - s:] = 0.0
        bounds = (0.0, 1.0)
    return TimeVaryingMDP(
        n, tuple(n - s for s in range(n)), T, rewards, transitions,
        reward_noise="deterministic", nonconforming=not normalize, reward_bounds=bounds,
        name=f"inventory({kind},S={S})",
        spec=_spec(config, kind, normalize))


def _spec(config, kind, normalize):
    if not config.generated_demand:
        return None
    params = {k: getattr(config, k) for k in (
        "capacity", "horizon", "fixed_cost", "unit_cost", "lost_sale_cost", "holding_cost",
        "floor", "cycles")}
    params.update(kind=kind, normalize=normalize)
    return {"generator": "inventory", "params": params}


@dataclass
class CensoredOutcome:
    pseudo_reward: float
    next_state: int
    sales: int  # censored demand min(X, s + a)


def draw_demand(config, t, rng):
    x = int(np.searchsorted(np.cumsum(config.demand[t - 1]), rng.random(), side="right"))
    return min(x, config.capacity)


def _observe(config, s, a, x):
    y = s + a
    return CensoredOutcome(_pseudo(config, s, a, x), max(y - x, 0), min(x, y))


def censored_step(config, t, s, a, rng):
    """One period at stock ``s`` ordering ``a``; the raw demand stays hidden."""
    if not 0 <= s <= config.capacity or not 0 <= a <= config.capacity - s:
        raise IndexError(f"invalid stock/order ({s}, {a})")
    return _observe(config, s, a, draw_demand(config, t, rng))


class InventoryEnv:
    """Environment driven by sampled demand; the agent sees only sales.

    Exposes the tabular model through ``mdp`` for oracles and regret.
    """

    def __init__(self, config, kind="pseudo", normalize=True):
        self.config = config
        self.kind = kind
        self.mdp = inventory_mdp(config, kind, normalize)
        lo, hi = reward_range(config, kind)
        self._lo, self._scale = (lo, (hi - lo) or 1.0) if normalize else (0.0, 1.0)

    def __getattr__(self, name):
        if name.startswith("__") or name == "mdp":
            raise AttributeError(name)
        return getattr(self.mdp, name)

    def step(self, t, s, a, rng):
        if not 0 <= s <= self.config.capacity or not 0 <= a <= self.config.capacity - s:
            raise IndexError(f"invalid state-action pair ({s}, {a})")
        x = draw_demand(self.config, t, rng)
        out = _observe(self.config, s, a, x)
        # the raw cost needs X itself; only simulations and tests use it
        r = out.pseudo_reward if self.kind == "pseudo" else _raw(self.config, s, a, x)
        return StepOutcome((r - self._lo) / self._scale, out.next_state)
