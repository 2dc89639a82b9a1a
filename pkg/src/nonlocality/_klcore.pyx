# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled solvers for projecting a behavior onto the local polytope in KL distance.

Same contract as the NumPy fallback module: vertices are encoded by the flat
cell index they select in each setting-pair block, `target` is the
setting-weighted behavior, and gaps are in nats.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()

DEF REBUILD_EVERY = 256


cdef double _line_search(
    const double[::1] c,
    const double[::1] q,
    const double[::1] d,
    const Py_ssize_t[::1] sup,
    double t_hi,
) noexcept nogil:
    """Minimize -sum c ln(q + t d) over [0, t_hi]; assumes descent at t = 0."""
    cdef Py_ssize_t n_sup = sup.shape[0]
    cdef Py_ssize_t i, z, it
    cdef double t_sing = INFINITY
    cdef double r, acc, lo, hi, mid
    for i in range(n_sup):
        z = sup[i]
        if d[z] < 0.0:
            r = -q[z] / d[z]
            if r < t_sing:
                t_sing = r
    if t_sing * (1.0 - 1e-12) < t_hi:
        t_hi = t_sing * (1.0 - 1e-12)
    if t_hi <= 0.0:
        return 0.0
    acc = 0.0
    for i in range(n_sup):
        z = sup[i]
        acc += c[z] * d[z] / (q[z] + t_hi * d[z])
    if acc >= 0.0:
        return t_hi
    lo = 0.0
    hi = t_hi
    for it in range(64):
        mid = 0.5 * (lo + hi)
        acc = 0.0
        for i in range(n_sup):
            z = sup[i]
            acc += c[z] * d[z] / (q[z] + mid * d[z])
        if acc > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


cdef void _rebuild(
    const double[::1] mu,
    const cnp.int64_t[:, ::1] cells,
    double[::1] q,
) noexcept nogil:
    cdef Py_ssize_t n_v = cells.shape[0]
    cdef Py_ssize_t n_blocks = cells.shape[1]
    cdef Py_ssize_t n_cells = q.shape[0]
    cdef Py_ssize_t v, b
    for b in range(n_cells):
        q[b] = 0.0
    for v in range(n_v):
        for b in range(n_blocks):
            q[cells[v, b]] += mu[v]


def solve_cg(target, vertex_cells, double tol_gap, long long max_iters):
    """Away-step conditional gradient over the vertex simplex.

    Exact line search on each 1-D segment; stops when the linearization gap
    drops to tol_gap (nats).  Returns (mu, gap, iterations, converged).
    """
    cdef cnp.int64_t[:, ::1] cells = np.ascontiguousarray(vertex_cells, dtype=np.int64)
    cdef double[::1] c = np.ascontiguousarray(target, dtype=np.float64)
    cdef Py_ssize_t n_v = cells.shape[0]
    cdef Py_ssize_t n_blocks = cells.shape[1]
    cdef Py_ssize_t n_cells = c.shape[0]

    sup_arr = np.flatnonzero(np.asarray(target) > 0.0).astype(np.intp)
    cdef Py_ssize_t[::1] sup = sup_arr
    cdef Py_ssize_t n_sup = sup.shape[0]

    mu_arr = np.full(n_v, 1.0 / n_v)
    cdef double[::1] mu = mu_arr
    q_arr = np.zeros(n_cells)
    cdef double[::1] q = q_arr
    d_arr = np.zeros(n_cells)
    cdef double[::1] d = d_arr
    cdef double[::1] scores = np.zeros(n_v)

    cdef double gap = INFINITY
    cdef double mu_dot, away_best, s, t, t_max, total
    cdef Py_ssize_t it, v, b, z, v_fw, v_aw
    cdef long long iterations = 0
    cdef bint converged = False

    with nogil:
        _rebuild(mu, cells, q)
        while iterations < max_iters:
            iterations += 1
            mu_dot = 0.0
            v_fw = 0
            v_aw = -1
            away_best = INFINITY
            for v in range(n_v):
                s = 0.0
                for b in range(n_blocks):
                    z = cells[v, b]
                    if c[z] > 0.0:
                        s += c[z] / q[z]
                scores[v] = s
                mu_dot += mu[v] * s
                if s > scores[v_fw]:
                    v_fw = v
                if mu[v] > 0.0 and s < away_best:
                    away_best = s
                    v_aw = v
            gap = scores[v_fw] - mu_dot
            if gap <= tol_gap:
                converged = True
                break

            if gap >= mu_dot - away_best or mu[v_aw] >= 1.0:
                for z in range(n_cells):
                    d[z] = -q[z]
                for b in range(n_blocks):
                    d[cells[v_fw, b]] += 1.0
                t = _line_search(c, q, d, sup, 1.0)
                for v in range(n_v):
                    mu[v] *= 1.0 - t
                mu[v_fw] += t
            else:
                for z in range(n_cells):
                    d[z] = q[z]
                for b in range(n_blocks):
                    d[cells[v_aw, b]] -= 1.0
                t_max = mu[v_aw] / (1.0 - mu[v_aw])
                t = _line_search(c, q, d, sup, t_max)
                for v in range(n_v):
                    mu[v] *= 1.0 + t
                mu[v_aw] -= t
                if mu[v_aw] < 0.0:
                    mu[v_aw] = 0.0
            for z in range(n_cells):
                q[z] += t * d[z]
                if q[z] < 0.0:
                    q[z] = 0.0
            if iterations % REBUILD_EVERY == 0:
                total = 0.0
                for v in range(n_v):
                    total += mu[v]
                for v in range(n_v):
                    mu[v] /= total
                _rebuild(mu, cells, q)

    return mu_arr, float(gap), int(iterations), bool(converged)


def solve_mw(target, vertex_cells, double tol_gap, long long max_iters):
    """Multiplicative-weights iteration: mu_v <- mu_v * sum_z target_z V_vz / q_z.

    The update factor is the (negated) gradient itself; the mixture is rebuilt
    exactly every step, so the iterate stays strictly inside the simplex.
    Same return contract as solve_cg.
    """
    cdef cnp.int64_t[:, ::1] cells = np.ascontiguousarray(vertex_cells, dtype=np.int64)
    cdef double[::1] c = np.ascontiguousarray(target, dtype=np.float64)
    cdef Py_ssize_t n_v = cells.shape[0]
    cdef Py_ssize_t n_blocks = cells.shape[1]
    cdef Py_ssize_t n_cells = c.shape[0]

    mu_arr = np.full(n_v, 1.0 / n_v)
    cdef double[::1] mu = mu_arr
    q_arr = np.zeros(n_cells)
    cdef double[::1] q = q_arr

    cdef double gap = INFINITY
    cdef double mu_dot, best, s, total
    cdef Py_ssize_t v, b, z
    cdef long long iterations = 0
    cdef bint converged = False
    cdef double[::1] scores = np.zeros(n_v)

    with nogil:
        while iterations < max_iters:
            iterations += 1
            _rebuild(mu, cells, q)
            mu_dot = 0.0
            best = -INFINITY
            for v in range(n_v):
                s = 0.0
                for b in range(n_blocks):
                    z = cells[v, b]
                    if c[z] > 0.0:
                        s += c[z] / q[z]
                scores[v] = s
                mu_dot += mu[v] * s
                if s > best:
                    best = s
            gap = best - mu_dot
            if gap <= tol_gap:
                converged = True
                break
            total = 0.0
            for v in range(n_v):
                mu[v] *= scores[v]
                total += mu[v]
            for v in range(n_v):
                mu[v] /= total

    return mu_arr, float(gap), int(iterations), bool(converged)
