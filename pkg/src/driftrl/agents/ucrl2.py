"""UCRL2 (full history, no widening) and its periodically restarted variant."""
import math

from .swucrl2cw import default_delta, model_of, run_segment
from .trace import Block, Recorder


def restart_period(T):
    # floor(T^(2/3)) with a guard against 5000**(2/3) = 292.4... rounding issues
    p = int(round(T ** (2 / 3)))
    while p ** 3 > T ** 2:
        p -= 1
    while (p + 1) ** 3 <= T ** 2:
        p += 1
    return max(p, 1)


def run_ucrl2(env, rng, delta=None, on_episode=None):
    mdp = model_of(env)
    T = mdp.horizon
    delta = delta or default_delta(T)
    rec = Recorder(T)
    run_segment(env, 1, T, T, 0.0, delta, rng, rec, mdp.initial_state, on_episode=on_episode)
    return rec.finish("ucrl2", {"window": T, "widening": 0.0, "delta": delta})


def run_ucrl2s(env, rng, delta=None, period=None, on_episode=None):
    """UCRL2 restarted from scratch every ``period`` steps (default floor(T^(2/3)))."""
    mdp = model_of(env)
    T = mdp.horizon
    delta = delta or default_delta(T)
    period = period or restart_period(T)
    rec = Recorder(T)
    s = mdp.initial_state
    for i in range(math.ceil(T / period)):
        start = i * period + 1
        length = min(period, T - i * period)
        s = run_segment(env, start, length, period, 0.0, delta, rng, rec, s,
                        log_horizon=T, on_episode=on_episode)
        rec.blocks.append(Block(i, start, start + length - 1, None, period, 0.0, None))
    return rec.finish("ucrl2s", {"period": period, "widening": 0.0, "delta": delta})
