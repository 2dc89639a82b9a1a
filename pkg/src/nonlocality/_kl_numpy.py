"""NumPy solvers for projecting a behavior onto the local polytope in KL distance.

Pure fallback with the same contract as the compiled module: each vertex is a
deterministic table selecting exactly one cell per setting-pair block, encoded
as the flat cell indices it selects.  `target` is the setting-weighted
behavior, flattened; gaps and tolerances are in nats.
"""

from __future__ import annotations

import numpy as np

# Incremental mixture updates drift; rebuild exactly this often.
REBUILD_EVERY = 256


def _mixture(mu: np.ndarray, cells: np.ndarray, n_cells: int) -> np.ndarray:
    n_blocks = cells.shape[1]
    return np.bincount(
        cells.ravel(), weights=np.repeat(mu, n_blocks), minlength=n_cells
    )


def _scores(target, q, cells, support):
    """Per-vertex linearized improvement sum_z target_z V_vz / q_z."""
    ratio = np.zeros_like(q)
    np.divide(target, q, out=ratio, where=support)
    return ratio[cells].sum(axis=1)


def _line_search(c_sup, q_sup, d_sup, t_hi):
    """Minimize -sum c ln(q + t d) over [0, t_hi]; assumes descent at t = 0."""
    neg = d_sup < 0.0
    if np.any(neg):
        t_sing = float(np.min(-q_sup[neg] / d_sup[neg]))
        if t_sing * (1.0 - 1e-12) < t_hi:
            t_hi = t_sing * (1.0 - 1e-12)
    if t_hi <= 0.0:
        return 0.0
    if float(np.sum(c_sup * d_sup / (q_sup + t_hi * d_sup))) >= 0.0:
        return t_hi
    lo, hi = 0.0, t_hi
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if float(np.sum(c_sup * d_sup / (q_sup + mid * d_sup))) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_cg(target, vertex_cells, tol_gap, max_iters):
    """Away-step conditional gradient over the vertex simplex.

    Exact line search on each 1-D segment; stops when the linearization gap
    drops to tol_gap (nats).  Returns (mu, gap, iterations, converged).
    """
    cells = np.asarray(vertex_cells, dtype=np.int64)
    c = np.asarray(target, dtype=float)
    n_v = cells.shape[0]
    n_cells = c.shape[0]
    support = c > 0.0
    c_sup = c[support]

    mu = np.full(n_v, 1.0 / n_v)
    q = _mixture(mu, cells, n_cells)
    gap = np.inf
    iterations = 0
    for iterations in range(1, int(max_iters) + 1):
        scores = _scores(c, q, cells, support)
        mu_dot = float(scores @ mu)
        v_fw = int(np.argmax(scores))
        gap = float(scores[v_fw] - mu_dot)
        if gap <= tol_gap:
            return mu, gap, iterations, True

        away_scores = np.where(mu > 0.0, scores, np.inf)
        v_aw = int(np.argmin(away_scores))
        if gap >= mu_dot - float(scores[v_aw]) or mu[v_aw] >= 1.0:
            d = -q.copy()
            d[cells[v_fw]] += 1.0
            t = _line_search(c_sup, q[support], d[support], 1.0)
            mu *= 1.0 - t
            mu[v_fw] += t
            q += t * d
        else:
            d = q.copy()
            d[cells[v_aw]] -= 1.0
            t_max = mu[v_aw] / (1.0 - mu[v_aw])
            t = _line_search(c_sup, q[support], d[support], t_max)
            mu *= 1.0 + t
            mu[v_aw] -= t
            mu[v_aw] = max(mu[v_aw], 0.0)
            q += t * d
        np.clip(q, 0.0, None, out=q)
        if iterations % REBUILD_EVERY == 0:
            mu /= mu.sum()
            q = _mixture(mu, cells, n_cells)
    return mu, gap, iterations, False


def solve_mw(target, vertex_cells, tol_gap, max_iters):
    """Multiplicative-weights iteration: mu_v <- mu_v * sum_z target_z V_vz / q_z.

    The update factor is the (negated) gradient itself, and the mixture is
    rebuilt exactly every step, so the iterate stays strictly inside the
    simplex.  Same return contract as solve_cg.
    """
    cells = np.asarray(vertex_cells, dtype=np.int64)
    c = np.asarray(target, dtype=float)
    n_v = cells.shape[0]
    n_cells = c.shape[0]
    support = c > 0.0

    mu = np.full(n_v, 1.0 / n_v)
    gap = np.inf
    iterations = 0
    for iterations in range(1, int(max_iters) + 1):
        q = _mixture(mu, cells, n_cells)
        scores = _scores(c, q, cells, support)
        mu_dot = float(scores @ mu)
        gap = float(scores.max() - mu_dot)
        if gap <= tol_gap:
            return mu, gap, iterations, True
        mu *= scores
        mu /= mu.sum()
    return mu, gap, iterations, False
