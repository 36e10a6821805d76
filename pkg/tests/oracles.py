"""Slow, obviously-correct reference computations used only by tests."""
import itertools
import math

import numpy as np


def random_mdp(rng, S, A, density=0.6, communicating=True):
    """Random rewards in [0,1] and sparse random transitions.

    With ``communicating`` the union support graph is forced strongly
    connected by adding a cycle through action 0 with small mass.
    """
    r = rng.random((S, A))
    p = rng.random((S, A, S)) * (rng.random((S, A, S)) < density)
    for s in range(S):
        for a in range(A):
            if p[s, a].sum() == 0:
                p[s, a, rng.integers(S)] = 1.0
    if communicating:
        for s in range(S):
            p[s, 0, (s + 1) % S] += 0.2
    p /= p.sum(axis=-1, keepdims=True)
    return r, p


def strongly_connected(p):
    S = p.shape[0]
    adj = (p > 0).any(axis=1)
    for src in range(S):
        seen = {src}
        stack = [src]
        while stack:
            u = stack.pop()
            for v in np.nonzero(adj[u])[0]:
                if v not in seen:
                    seen.add(int(v))
                    stack.append(int(v))
        if len(seen) < S:
            return False
    return True


def cesaro_limit(P):
    """Limit of the averaged powers, via squaring the lazy chain."""
    S = P.shape[0]
    M = 0.5 * (P + np.eye(S))
    for _ in range(200):
        nxt = M @ M
        # squaring amplifies row-sum rounding, so keep rows stochastic
        nxt /= nxt.sum(axis=1, keepdims=True)
        done = np.abs(nxt - M).max() < 1e-15
        M = nxt
        if done:
            break
    return M


def brute_force_gain(r, p):
    """Best long-run average over deterministic stationary policies, best start state."""
    S, A = r.shape
    best = -math.inf
    for pol in itertools.product(range(A), repeat=S):
        idx = np.arange(S)
        P = p[idx, pol]
        g = cesaro_limit(P) @ r[idx, pol]
        best = max(best, float(g.max()))
    return best


def policy_hitting_time(P, target):
    S = P.shape[0]
    others = [s for s in range(S) if s != target]
    M = np.eye(len(others)) - P[np.ix_(others, others)]
    try:
        sol = np.linalg.solve(M, np.ones(len(others)))
    except np.linalg.LinAlgError:
        return np.full(S, math.inf)
    h = np.zeros(S)
    if np.any(sol < -1e-9) or not np.all(np.isfinite(sol)):
        h[others] = math.inf
    else:
        h[others] = sol
    return h


def brute_force_diameter(p):
    """max_{s != s'} min over deterministic policies of the expected hitting time."""
    S, A, _ = p.shape
    worst = 0.0
    idx = np.arange(S)
    for target in range(S):
        best = np.full(S, math.inf)
        for pol in itertools.product(range(A), repeat=S):
            P = p[idx, pol]
            # a policy that cannot reach the target gives a singular or negative system
            reach = _reaches(P, target)
            h = policy_hitting_time(P, target) if reach.all() else np.full(S, math.inf)
            if reach.all():
                best = np.minimum(best, h)
        best[target] = 0.0
        worst = max(worst, float(best.max()))
    return worst


def _reaches(P, target):
    S = P.shape[0]
    ok = np.zeros(S, dtype=bool)
    ok[target] = True
    changed = True
    while changed:
        new = ok | ((P > 0) & ok[None, :]).any(axis=1)
        changed = not np.array_equal(new, ok)
        ok = new
    return ok


def simplex_grid(S, n):
    """All points of the simplex with coordinates in multiples of 1/n."""
    if S == 1:
        return np.ones((1, 1))
    pts = []
    for c in itertools.combinations(range(n + S - 1), S - 1):
        bars = (-1,) + c + (n + S - 1,)
        pts.append([bars[i + 1] - bars[i] - 1 for i in range(S)])
    return np.asarray(pts, dtype=np.float64) / n


_GRID_CACHE = {}


def grid_inner_max(u, center, budget, n=1000):
    """Max of p.u over grid points of the simplex inside the L1 ball."""
    S = len(u)
    key = (S, n)
    if key not in _GRID_CACHE:
        _GRID_CACHE[key] = simplex_grid(S, n)
    grid = _GRID_CACHE[key]
    if center.sum() == 0:
        inside = np.ones(len(grid), dtype=bool)
    else:
        inside = np.abs(grid - center).sum(axis=1) <= budget + 1e-12
    # the grid may miss the ball entirely when it is thinner than the spacing
    if not inside.any():
        return float(center @ u)
    return float((grid[inside] @ u).max())


def vertex_inner_max(u, center, budget):
    """Exact LP optimum by enumerating every vertex of the feasible polytope.

    Constraints: sum p = 1, p_i >= 0 and, for each sign vector sigma,
    sigma . (p - center) <= budget.  A vertex fixes S-1 of the inequalities.
    """
    S = len(u)
    if center.sum() == 0:
        return float(u.max())
    rows, rhs = [], []
    for i in range(S):
        e = np.zeros(S)
        e[i] = -1.0
        rows.append(e)
        rhs.append(0.0)
    for sigma in itertools.product((-1.0, 1.0), repeat=S):
        sigma = np.asarray(sigma)
        rows.append(sigma)
        rhs.append(budget + sigma @ center)
    G, h = np.asarray(rows), np.asarray(rhs)
    combos = np.array(list(itertools.combinations(range(len(G)), S - 1)))
    M = np.empty((len(combos), S, S))
    b = np.empty((len(combos), S))
    M[:, 0, :] = 1.0
    b[:, 0] = 1.0
    M[:, 1:, :] = G[combos]
    b[:, 1:] = h[combos]
    det = np.linalg.det(M)
    ok = np.abs(det) > 1e-10
    sol = np.linalg.solve(M[ok], b[ok][..., None])[..., 0]
    feasible = (sol @ G.T <= h + 1e-9).all(axis=1)
    return float((sol[feasible] @ u).max())


def total_variation_cos(amplitude, freq, t0, t1):
    """Total variation of amplitude*cos(freq*x) over [t0, t1] (continuous)."""
    return _tv(lambda x: amplitude * np.cos(freq * x), freq, t0, t1)


def total_variation_sin(amplitude, freq, t0, t1):
    return _tv(lambda x: amplitude * np.sin(freq * x), freq, t0, t1)


def _tv(f, freq, t0, t1):
    # extrema of sin/cos(freq x) sit at multiples of pi/(2 freq)
    step = math.pi / (2 * freq)
    ks = np.arange(math.ceil(t0 / step), math.floor(t1 / step) + 1)
    xs = np.concatenate([[t0], ks * step, [t1]])
    vals = f(xs)
    return float(np.abs(np.diff(vals)).sum())
