"""Extended value iteration over reward intervals and L1 transition balls."""
from dataclasses import dataclass

import numpy as np

from . import kernels


class EviNonConvergence(RuntimeError):
    """EVI hit its iteration cap; the optimistic class may be non-communicating."""

    def __init__(self, last_span, iterations):
        super().__init__(f"EVI non-convergent after {iterations} iterations (last span {last_span:.3g})")
        self.last_span = last_span
        self.iterations = iterations


@dataclass
class EviResult:
    policy: np.ndarray
    optimistic_rewards: np.ndarray
    optimistic_transitions: np.ndarray
    gain: float
    bias: np.ndarray
    iterations: int
    epsilon: float


class InvariantMonitor:
    """Checks the optimism properties on every EVI call while enabled."""

    def __init__(self):
        self.enabled = False
        self.calls = 0
        self.violations = []

    def reset(self):
        self.calls = 0
        self.violations = []


monitor = InvariantMonitor()


def inner_max_distribution(values, center, budget):
    """Exact maximiser of ``p . values`` over the simplex within L1 ``budget`` of ``center``.

    A zero ``center`` (no data) means the whole simplex.
    """
    values = np.asarray(values, dtype=np.float64)
    center = np.asarray(center, dtype=np.float64)
    if budget < 0:
        raise ValueError("budget must be non-negative")
    return kernels.optimistic_rows(values, center[None, :], np.array([float(budget)]))[0]


def optimism_gaps(regions, result):
    """Slack of Property 1 and Property 2 per pair / state (negative means violated).

    Property 1 is checked in its dual-feasibility form, against the maximum of
    ``p . bias`` over the ball.
    """
    bias = result.bias
    S, A = regions.reward_center.shape
    valid = np.arange(A)[None, :] < regions.n_actions[:, None]
    rows = kernels.optimistic_rows(bias, regions.transition_center, regions.transition_budget)
    rhs = regions.reward_upper() + rows @ bias
    gap1 = np.where(valid, result.gain + bias[:, None] - rhs, np.inf)
    idx = np.arange(S)
    pol = result.policy
    r_pi = result.optimistic_rewards[idx, pol]
    p_pi = result.optimistic_transitions[idx, pol]
    gap2 = r_pi - (result.gain + bias - p_pi @ bias)
    return gap1, gap2


def _check(regions, result):
    monitor.calls += 1
    gap1, gap2 = optimism_gaps(regions, result)
    tol = 2.0 * result.epsilon + 1e-9
    if gap1.min() < -tol or gap2.min() < -tol:
        monitor.violations.append({
            "property1": float(gap1.min()), "property2": float(gap2.min()),
            "epsilon": result.epsilon,
        })


def extended_value_iteration(regions, epsilon, max_iterations=100_000):
    """Optimistic policy, model, gain and bias for ``regions`` at precision ``epsilon``."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    r_up = regions.reward_upper()
    budgets = regions.transition_budget
    u, diff, policy, iterations, converged = kernels.evi_sweeps(
        r_up, regions.transition_center, budgets, regions.n_actions, float(epsilon),
        int(max_iterations))
    if not converged:
        raise EviNonConvergence(float(diff.max() - diff.min()), iterations)
    order = kernels.sort_desc(u)
    p_tilde = kernels.optimistic_rows(u, regions.transition_center, budgets, order)
    result = EviResult(
        policy=np.asarray(policy, dtype=np.int64),
        optimistic_rewards=r_up,
        optimistic_transitions=p_tilde,
        gain=float(diff.max()),
        bias=u - u.min(),
        iterations=int(iterations),
        epsilon=float(epsilon),
    )
    if monitor.enabled:
        _check(regions, result)
    return result
