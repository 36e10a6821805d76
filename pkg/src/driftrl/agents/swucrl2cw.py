"""Sliding-window UCRL2 with confidence widening."""
from dataclasses import dataclass
import math

import numpy as np

from ..evi import EviNonConvergence, extended_value_iteration
from ..sliding import WindowBuffer, build_regions
from .trace import Episode, Recorder

# widening used for the retry when the configured one is zero
RETRY_WIDENING = 0.05


class AgentError(RuntimeError):
    pass


@dataclass
class SwConfig:
    window: int
    widening: float = 0.0
    delta: float = None            # None means 1/T
    max_evi_iterations: int = 100_000

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be a positive integer")
        if self.widening < 0:
            raise ValueError("widening must be non-negative")
        if self.delta is not None and not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")


def default_delta(horizon):
    return min(0.5, 1.0 / horizon)


def theoretical_params(S, A, T, reward_budget, transition_budget):
    """Window and widening that balance the regret terms for known budgets."""
    total = reward_budget + transition_budget
    scale = S ** (2 / 3) * A ** 0.5 * T ** 0.5
    if total <= 0:
        w = min(max(int(round(scale)), 1), T)
        return w, math.sqrt(w / T)
    w = min(max(int(round(scale / math.sqrt(total))), 1), T)
    return w, math.sqrt(transition_budget * w / T)


def model_of(env):
    return getattr(env, "mdp", env)


def run_segment(env, start, length, window, widening, delta, rng, recorder, state,
                log_horizon=None, on_episode=None, max_evi_iterations=100_000):
    """Fresh SWUCRL2-CW instance over global steps ``start .. start+length-1``.

    Time inside the segment is local (1-based).  Returns the state reached
    after the last step.
    """
    mdp = model_of(env)
    S, A = mdp.num_states, mdp.mean_actions
    T = log_horizon or mdp.horizon
    n_actions = mdp.n_actions
    rewards = mdp.rewards
    buf = WindowBuffer(window, S, mdp.max_actions)
    s = state
    k = 1
    while k <= length:
        tau = k
        regions = build_regions(buf, tau, delta, widening, S, A, T, n_actions, mdp.reward_bounds)
        eps = 1.0 / math.sqrt(tau)
        retried = False
        try:
            res = extended_value_iteration(regions, eps, max_evi_iterations)
        except EviNonConvergence:
            retried = True
            regions = regions.with_widening(2.0 * widening if widening > 0 else RETRY_WIDENING)
            try:
                res = extended_value_iteration(regions, eps, max_evi_iterations)
            except EviNonConvergence as exc:
                raise AgentError(
                    f"EVI failed at local time {tau} (global {start + tau - 1}), window {window}, "
                    f"widening {regions.widening}: {exc}") from exc
        if on_episode is not None:
            on_episode(len(recorder.episodes), start + tau - 1, regions, res)
        policy = res.policy
        n_plus = regions.counts.n_plus
        nu = np.zeros_like(n_plus)
        reason, trigger = "horizon", None
        while k <= length:
            a = int(policy[s])
            if k > tau:
                if (k - 1) % window == 0:
                    reason = "window"
                    break
                if nu[s, a] >= n_plus[s, a]:
                    reason, trigger = "doubling", (s, a)
                    break
            t = start + k - 1
            out = env.step(t, s, a, rng)
            recorder.record(t, s, a, out.reward, rewards[t - 1, s, a])
            buf.record(k, s, a, out.reward, out.next_state)
            nu[s, a] += 1
            s = out.next_state
            k += 1
        recorder.episodes.append(Episode(
            len(recorder.episodes), start + tau - 1, start + k - 2, reason, window, regions.widening,
            eps, res.gain, tuple(int(x) for x in policy), nu, n_plus, trigger, retried))
    return s


def run_swucrl2cw(env, config, rng, on_episode=None):
    mdp = model_of(env)
    T = mdp.horizon
    if config.window > T:
        raise ValueError("window must not exceed the horizon")
    delta = config.delta or default_delta(T)
    rec = Recorder(T)
    run_segment(env, 1, T, config.window, config.widening, delta, rng, rec, mdp.initial_state,
                on_episode=on_episode, max_evi_iterations=config.max_evi_iterations)
    return rec.finish("swucrl2cw", {"window": config.window, "widening": config.widening,
                                    "delta": delta})


def episode_bound(S, A, window, length):
    """Upper bound on the episode count of one segment.

    A window longer than the segment never slides, so it acts as ``length``.
    """
    w = min(window, length)
    return S * A * (2 + math.log2(w)) * length / w
