# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops for extended value iteration and hitting times."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, fabs

cnp.import_array()


cdef void _sort_desc(const double[:] u, Py_ssize_t[:] order) noexcept nogil:
    # stable insertion sort: descending value, lowest index first on ties
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t i, j, key
    for i in range(n):
        order[i] = i
    for i in range(1, n):
        key = order[i]
        j = i - 1
        while j >= 0 and u[order[j]] < u[key]:
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = key


cdef double _row_value(const double[:] u, const Py_ssize_t[:] order,
                       const double[:] center, double budget,
                       double[:] work) noexcept nogil:
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t k, j, top = order[0]
    cdef double total = 0.0, add, remove, take, value
    for k in range(n):
        total += center[k]
    if budget >= 2.0 or total <= 0.0:
        return u[top]
    for k in range(n):
        work[k] = center[order[k]]
    add = budget / 2.0
    if add > 1.0 - work[0]:
        add = 1.0 - work[0]
    if add < 0.0:
        add = 0.0
    work[0] += add
    remove = add
    j = n - 1
    while j > 0 and remove > 0.0:
        take = work[j] if work[j] < remove else remove
        work[j] -= take
        remove -= take
        j -= 1
    value = 0.0
    for k in range(n):
        value += work[k] * u[order[k]]
    return value


def sort_desc(values):
    cdef const double[:] u = np.ascontiguousarray(values, dtype=np.float64)
    order = np.empty(u.shape[0], dtype=np.intp)
    cdef Py_ssize_t[:] o = order
    _sort_desc(u, o)
    return order


def evi_sweeps(reward_upper, centers, budgets, n_actions, double epsilon,
               Py_ssize_t max_iterations):
    cdef const double[:, :] r = np.ascontiguousarray(reward_upper, dtype=np.float64)
    cdef const double[:, :, :] p = np.ascontiguousarray(centers, dtype=np.float64)
    cdef const double[:, :] b = np.ascontiguousarray(budgets, dtype=np.float64)
    cdef const long long[:] na = np.ascontiguousarray(n_actions, dtype=np.int64)
    cdef Py_ssize_t S = r.shape[0]
    cdef Py_ssize_t s, a, it, best_a
    cdef double q, best, lo, hi, shift

    u_arr = np.zeros(S)
    nxt_arr = np.zeros(S)
    diff_arr = np.zeros(S)
    pol_arr = np.zeros(S, dtype=np.int64)
    cdef double[:] u = u_arr
    cdef double[:] nxt = nxt_arr
    cdef double[:] diff = diff_arr
    cdef long long[:] pol = pol_arr
    cdef double[:] work = np.zeros(S)
    cdef Py_ssize_t[:] order = np.zeros(S, dtype=np.intp)
    cdef bint converged = False

    with nogil:
        for it in range(1, max_iterations + 1):
            _sort_desc(u, order)
            for s in range(S):
                best = -INFINITY
                best_a = 0
                for a in range(na[s]):
                    q = r[s, a] + _row_value(u, order, p[s, a], b[s, a], work)
                    if q > best:
                        best = q
                        best_a = a
                nxt[s] = best
                pol[s] = best_a
            lo = INFINITY
            hi = -INFINITY
            for s in range(S):
                diff[s] = nxt[s] - u[s]
                if diff[s] < lo:
                    lo = diff[s]
                if diff[s] > hi:
                    hi = diff[s]
            if hi - lo <= epsilon:
                converged = True
                break
            shift = INFINITY
            for s in range(S):
                if nxt[s] < shift:
                    shift = nxt[s]
            for s in range(S):
                u[s] = nxt[s] - shift
    if not converged:
        it = max_iterations
    return u_arr, diff_arr, pol_arr, it, converged


def optimistic_rows(values, centers, budgets, order=None):
    cdef const double[:] u = np.ascontiguousarray(values, dtype=np.float64)
    c_arr = np.asarray(centers, dtype=np.float64)
    shape = c_arr.shape
    cdef Py_ssize_t S = u.shape[0]
    cdef const double[:, :] c = np.ascontiguousarray(c_arr.reshape(-1, S))
    cdef const double[:] bud = np.ascontiguousarray(
        np.broadcast_to(np.asarray(budgets, dtype=np.float64), shape[:-1]).reshape(-1))
    out_arr = np.zeros((c.shape[0], S))
    cdef double[:, :] out = out_arr
    cdef const Py_ssize_t[:] o
    if order is None:
        o = sort_desc(values)
    else:
        o = np.ascontiguousarray(order, dtype=np.intp)
    cdef Py_ssize_t i, k, j, top = o[0]
    cdef double total, add, remove, take
    for i in range(c.shape[0]):
        total = 0.0
        for k in range(S):
            total += c[i, k]
        if bud[i] >= 2.0 or total <= 0.0:
            out[i, top] = 1.0
            continue
        for k in range(S):
            out[i, k] = c[i, k]
        add = bud[i] / 2.0
        if add > 1.0 - c[i, top]:
            add = 1.0 - c[i, top]
        if add < 0.0:
            add = 0.0
        out[i, top] += add
        remove = add
        j = S - 1
        while j > 0 and remove > 0.0:
            k = o[j]
            take = out[i, k] if out[i, k] < remove else remove
            out[i, k] -= take
            remove -= take
            j -= 1
    return out_arr.reshape(shape)


def ssp_sweeps(transitions, n_actions, Py_ssize_t target, double tol,
               Py_ssize_t max_iterations):
    cdef const double[:, :, :] p = np.ascontiguousarray(transitions, dtype=np.float64)
    cdef const long long[:] na = np.ascontiguousarray(n_actions, dtype=np.int64)
    cdef Py_ssize_t S = p.shape[0]
    cdef Py_ssize_t s, a, k, it
    cdef double q, best, change, d
    h_arr = np.zeros(S)
    cdef double[:] h = h_arr
    cdef double[:] nxt = np.zeros(S)
    cdef bint converged = False
    with nogil:
        for it in range(1, max_iterations + 1):
            change = 0.0
            for s in range(S):
                if s == target:
                    nxt[s] = 0.0
                    continue
                best = INFINITY
                for a in range(na[s]):
                    q = 1.0
                    for k in range(S):
                        q += p[s, a, k] * h[k]
                    if q < best:
                        best = q
                nxt[s] = best
            for s in range(S):
                d = fabs(nxt[s] - h[s])
                if d > change:
                    change = d
                h[s] = nxt[s]
            if change <= tol:
                converged = True
                break
    if not converged:
        it = max_iterations
    return h_arr, it, converged
