"""Shared multi-start Nelder-Mead machinery and the common result record."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

SIMPLEX_TOL = 1e-9
MAX_ITERATIONS = 2000


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of a search: best value, parameters, and solver diagnostics."""

    value: float
    params: dict[str, float]
    iterations: int
    n_evaluations: int
    converged: bool
    gap: float | None = None
    seed: int | None = None
    extras: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "value": self.value,
            "params": dict(self.params),
            "iterations": self.iterations,
            "n_evaluations": self.n_evaluations,
            "converged": self.converged,
        }
        if self.gap is not None:
            out["gap"] = self.gap
        if self.seed is not None:
            out["seed"] = self.seed
        out.update(self.extras)
        return out


def multistart_minimize(
    objective: Callable[[np.ndarray], float],
    starts: Sequence[np.ndarray],
    xatol: float = SIMPLEX_TOL,
    fatol: float = 1e-12,
    max_iterations: int = MAX_ITERATIONS,
) -> tuple[np.ndarray, float, int, int, bool]:
    """Run Nelder-Mead from every start; keep the best minimum.

    Ties resolve to the earliest start, so results are reproducible for a
    fixed start list.  Returns (x, f, iterations, evaluations, any_converged).
    """
    if not starts:
        raise ValueError("at least one start point is required")
    best_x = None
    best_f = np.inf
    total_iter = 0
    total_eval = 0
    any_converged = False
    for x0 in starts:
        res = minimize(
            objective,
            np.asarray(x0, dtype=float),
            method="Nelder-Mead",
            options={
                "xatol": xatol,
                "fatol": fatol,
                "maxiter": max_iterations,
                "maxfev": 50 * max_iterations,
            },
        )
        total_iter += res.nit
        total_eval += res.nfev
        any_converged = any_converged or bool(res.success)
        if res.fun < best_f:
            best_f = float(res.fun)
            best_x = np.array(res.x, dtype=float)
    return best_x, best_f, total_iter, total_eval, any_converged


def wrap_angle(x: float) -> float:
    """Shift by whole turns into (-pi, pi]; safe for any 2pi-periodic parameter."""
    wrapped = math.fmod(float(x) + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


def golden_section_minimize(
    objective: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-8,
) -> tuple[float, float, int]:
    """Golden-section search for a scalar minimum on [lo, hi].

    Assumes unimodality on the bracket; callers bracket with a coarse grid
    first.  Returns (x, f(x), evaluations).
    """
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = objective(c), objective(d)
    n_eval = 2
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = objective(d)
        n_eval += 1
    x = c if fc < fd else d
    f = min(fc, fd)
    return x, f, n_eval
