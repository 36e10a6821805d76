"""Pure numpy implementations of the hot loops.

Same signatures and semantics as the compiled ``_core`` module.  Used when the
extension is not built or ``DRIFTRL_PURE_PYTHON`` is set.
"""
import numpy as np


def sort_desc(values):
    # descending, ties broken by lowest index
    return np.argsort(-np.asarray(values, dtype=np.float64), kind="stable")


def optimistic_rows(values, centers, budgets, order=None):
    """Maximise ``p . values`` over each L1 ball, row by row.

    ``centers`` has shape (..., S) and ``budgets`` shape (...).  Returns the
    maximising distributions with the same shape as ``centers``.
    """
    values = np.asarray(values, dtype=np.float64)
    centers = np.asarray(centers, dtype=np.float64)
    budgets = np.asarray(budgets, dtype=np.float64)
    if order is None:
        order = sort_desc(values)
    top = order[0]
    ps = centers[..., order].copy()
    head = ps[..., 0]
    add = np.minimum(budgets / 2.0, 1.0 - head)
    add = np.maximum(add, 0.0)
    ps[..., 0] = head + add
    # remove the same mass from the lowest-valued states first
    tail = ps[..., :0:-1]
    removed_before = np.cumsum(tail, axis=-1) - tail
    take = np.clip(add[..., None] - removed_before, 0.0, tail)
    ps[..., :0:-1] = tail - take
    out = np.empty_like(ps)
    out[..., order] = ps
    full = (budgets >= 2.0) | (centers.sum(axis=-1) <= 0.0)
    if np.any(full):
        point = np.zeros(centers.shape[-1])
        point[top] = 1.0
        out[full] = point
    return out


def _backup(u, reward_upper, centers, budgets, valid):
    order = sort_desc(u)
    rows = optimistic_rows(u, centers, budgets, order)
    q = reward_upper + rows @ u
    return np.where(valid, q, -np.inf)


def evi_sweeps(reward_upper, centers, budgets, n_actions, epsilon, max_iterations):
    """Run extended value iteration sweeps until the span stopping rule fires.

    Returns ``(u, diff, policy, iterations, converged)`` where ``u`` is the
    record the last backup was applied to and ``diff = u_next - u``.
    """
    reward_upper = np.asarray(reward_upper, dtype=np.float64)
    S, A = reward_upper.shape
    valid = np.arange(A)[None, :] < np.asarray(n_actions)[:, None]
    u = np.zeros(S)
    diff = np.zeros(S)
    policy = np.zeros(S, dtype=np.int64)
    for it in range(1, max_iterations + 1):
        q = _backup(u, reward_upper, centers, budgets, valid)
        u_next = q.max(axis=1)
        diff = u_next - u
        if diff.max() - diff.min() <= epsilon:
            policy = q.argmax(axis=1).astype(np.int64)
            return u, diff, policy, it, True
        u = u_next - u_next.min()
    q = _backup(u, reward_upper, centers, budgets, valid)
    policy = q.argmax(axis=1).astype(np.int64)
    return u, diff, policy, max_iterations, False


def ssp_sweeps(transitions, n_actions, target, tol, max_iterations):
    """Value iteration for minimal expected hitting times of ``target``.

    Returns ``(h, iterations, converged)``.
    """
    p = np.asarray(transitions, dtype=np.float64)
    S, A, _ = p.shape
    valid = np.arange(A)[None, :] < np.asarray(n_actions)[:, None]
    h = np.zeros(S)
    for it in range(1, max_iterations + 1):
        q = np.where(valid, 1.0 + p @ h, np.inf)
        h_next = q.min(axis=1)
        h_next[target] = 0.0
        change = np.max(np.abs(h_next - h))
        h = h_next
        if change <= tol:
            return h, it, True
    return h, max_iterations, False
