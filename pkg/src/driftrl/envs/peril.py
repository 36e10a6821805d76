"""Two deterministic diameter-1 MDPs whose alternation fools sliding-window estimates.

States 1 and 2 are indices 0 and 1.  Actions at state 1 are (a1, a2), at
state 2 (b1, b2), both indexed (0, 1).
"""
from dataclasses import dataclass

import numpy as np

from ..mdp import TimeVaryingMDP, diameter, region_diameter
from ..sliding import WindowBuffer, build_regions


def _deterministic(table):
    p = np.zeros((2, 2, 2))
    for (s, a), nxt in table.items():
        p[s, a, nxt] = 1.0
    return p


# p1: a1 stays, a2 moves, b1 stays, b2 moves
P1 = _deterministic({(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0})
# p2: the roles swap
P2 = _deterministic({(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 1})

POLICY_1 = np.array([0, 1])  # a1 at state 1, b2 at state 2
POLICY_2 = np.array([1, 0])  # a2 at state 1, b1 at state 2


@dataclass
class PerilConfig:
    tau: int

    def __post_init__(self):
        if self.tau < 2:
            raise ValueError("tau must be at least 2")

    @property
    def window(self):
        return 4 * self.tau


def peril_instance(config):
    """Transition sequence of length W = 4 tau and the scripted action schedule."""
    tau = config.tau
    blocks = [P1, P2, P1, P2]
    seq = np.concatenate([np.broadcast_to(b, (tau, 2, 2, 2)) for b in blocks])
    schedule = np.concatenate([np.broadcast_to(POLICY_1, (2 * tau, 2)),
                               np.broadcast_to(POLICY_2, (2 * tau, 2))])
    return seq, schedule


def peril_mdp(config, rewards=((0.0, 0.0), (1.0, 1.0))):
    seq, _ = peril_instance(config)
    r = np.broadcast_to(np.asarray(rewards, dtype=np.float64), (len(seq), 2, 2))
    return TimeVaryingMDP(2, (2, 2), len(seq), r, seq, name=f"peril(tau={config.tau})",
                          spec={"generator": "peril", "params": {"tau": config.tau}})


def scripted_trajectory(config):
    """(states, actions, next_states) from following the schedule from state 1."""
    seq, schedule = peril_instance(config)
    W = len(seq)
    states = np.empty(W, dtype=np.int64)
    actions = np.empty(W, dtype=np.int64)
    nxt = np.empty(W, dtype=np.int64)
    s = 0
    for i in range(W):
        a = schedule[i, s]
        states[i], actions[i] = s, a
        s = int(np.argmax(seq[i, s, a]))
        nxt[i] = s
    return states, actions, nxt


def peril_report(config, delta=0.1, eta=0.5):
    """Empirical model at time W+1 and the diameters it implies."""
    states, actions, nxt = scripted_trajectory(config)
    W = config.window
    buf = WindowBuffer(W, 2, 2)
    for i, (s, a, n) in enumerate(zip(states, actions, nxt)):
        buf.record(i + 1, int(s), int(a), 0.0, int(n))
    regions = build_regions(buf, W + 1, delta, 0.0, 2, 2, W)
    p_hat = regions.transition_center
    return {
        "tau": config.tau,
        "window": W,
        "visits": regions.counts.n.tolist(),
        "empirical_transitions": p_hat.tolist(),
        "diameter_p1": diameter(P1),
        "diameter_p2": diameter(P2),
        "diameter_empirical": diameter(p_hat),
        "delta": delta,
        "eta": eta,
        "transition_radius": regions.transition_radius.tolist(),
        "region_diameter_eta0": region_diameter(p_hat, regions.transition_radius),
        "region_diameter_eta": region_diameter(p_hat, regions.transition_radius + eta),
    }
