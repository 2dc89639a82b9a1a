"""The local polytope: deterministic vertices, KL projection, and KL maximization."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
import math

import numpy as np
from scipy.optimize import linprog

from . import kernels
from .behavior import BehaviorTable
from .cglmp import CANONICAL_PHASES, CglmpScenario, scenario_behavior
from .optimize import OptimizationResult, golden_section_minimize, multistart_minimize, wrap_angle
from .states import make_gamma_state

VERTEX_GUARD = 10**6
WEIGHT_SUM_TOL = 1e-9
DEFAULT_GAP_BITS = 1e-9
DEFAULT_MAX_ITERATIONS = 100_000
LN2 = math.log(2.0)


@dataclass(eq=False)
class LocalPolytope:
    """Deterministic-strategy vertices of a (sa, sb, oa, ob) scenario."""

    shape: tuple[int, int, int, int]
    assignments: np.ndarray = field(repr=False)

    @property
    def n_vertices(self) -> int:
        return self.assignments.shape[0]

    @cached_property
    def vertex_cells(self) -> np.ndarray:
        """Flat cell index each vertex selects per setting pair, shape (n_v, sa*sb)."""
        sa, sb, oa, ob = self.shape
        f = self.assignments[:, :sa]
        g = self.assignments[:, sa:]
        x = np.arange(sa)[None, :, None]
        y = np.arange(sb)[None, None, :]
        a = f[:, :, None]
        b = g[:, None, :]
        cells = ((x * sb + y) * oa + a) * ob + b
        return np.ascontiguousarray(cells.reshape(self.n_vertices, sa * sb), dtype=np.int64)

    @cached_property
    def vertex_matrix(self) -> np.ndarray:
        """Dense 0/1 matrix of vertex behaviors, shape (n_v, sa*sb*oa*ob)."""
        sa, sb, oa, ob = self.shape
        m = np.zeros((self.n_vertices, sa * sb * oa * ob))
        np.put_along_axis(m, self.vertex_cells, 1.0, axis=1)
        return m

    def vertex_table(self, index: int) -> BehaviorTable:
        sa, sb, oa, ob = self.shape
        return BehaviorTable(self.vertex_matrix[index].reshape(sa, sb, oa, ob))

    def mix(self, weights: np.ndarray) -> BehaviorTable:
        """Behavior of a convex mixture of vertices."""
        w = np.asarray(weights, dtype=float)
        if w.shape != (self.n_vertices,):
            raise ValueError(f"expected {self.n_vertices} weights, got shape {w.shape}")
        if w.min() < -1e-12 or abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError("weights must be a probability vector")
        sa, sb, oa, ob = self.shape
        n_cells = sa * sb * oa * ob
        flat = np.bincount(
            self.vertex_cells.ravel(),
            weights=np.repeat(np.clip(w, 0.0, None), sa * sb),
            minlength=n_cells,
        )
        return BehaviorTable(flat.reshape(sa, sb, oa, ob))


def enumerate_vertices(shape: tuple[int, int, int, int]) -> LocalPolytope:
    """All deterministic strategies, ordered lexicographically (A outer, B inner)."""
    sa, sb, oa, ob = (int(v) for v in shape)
    if min(sa, sb, oa, ob) < 1:
        raise ValueError(f"scenario dimensions must be positive, got {shape}")
    n_v = oa**sa * ob**sb
    if n_v > VERTEX_GUARD:
        raise ValueError(f"scenario has {n_v} vertices, beyond the {VERTEX_GUARD} guard")
    rows = [
        f + g
        for f in product(range(oa), repeat=sa)
        for g in product(range(ob), repeat=sb)
    ]
    return LocalPolytope(shape=(sa, sb, oa, ob), assignments=np.array(rows, dtype=np.int64))


def _setting_weights(weights, shape) -> np.ndarray:
    sa, sb = shape[0], shape[1]
    if weights is None:
        return np.full((sa, sb), 1.0 / (sa * sb))
    w = np.asarray(weights, dtype=float)
    if w.shape != (sa, sb):
        raise ValueError(f"setting weights must have shape {(sa, sb)}, got {w.shape}")
    if w.min() < 0.0 or abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError("setting weights must be a probability distribution")
    return w


def kl_divergence(p: BehaviorTable, q: BehaviorTable, setting_weights=None) -> float:
    """Setting-weighted relative entropy sum_xy w(x,y) D(P(.|xy) || Q(.|xy)), in bits.

    Returns inf when P puts mass where Q has none.
    """
    if p.shape != q.shape:
        raise ValueError(f"behavior shapes differ: {p.shape} vs {q.shape}")
    w = _setting_weights(setting_weights, p.shape)
    pp = p.probs
    qq = q.probs
    mask = pp > 0.0
    if np.any(qq[mask] == 0.0):
        return math.inf
    terms = np.zeros_like(pp)
    terms[mask] = pp[mask] * np.log2(pp[mask] / qq[mask])
    return float(np.sum(w[:, :, None, None] * terms))


@dataclass(frozen=True)
class KlResult:
    """KL projection onto the local polytope: distance, mixture, and certificate."""

    distance_bits: float
    weights: np.ndarray = field(repr=False)
    gap_bits: float
    iterations: int
    converged: bool
    solver: str

    def to_json_dict(self) -> dict:
        return {
            "distance_bits": self.distance_bits,
            "gap_bits": self.gap_bits,
            "iterations": self.iterations,
            "converged": self.converged,
            "solver": self.solver,
        }


def kl_to_local(
    p: BehaviorTable,
    polytope: LocalPolytope | None = None,
    setting_weights=None,
    tol_gap_bits: float = DEFAULT_GAP_BITS,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    solver: str = "cg",
) -> KlResult:
    """Minimize the weighted KL divergence to the polytope over vertex mixtures.

    solver 'cg' is the away-step conditional gradient; 'mw' the multiplicative
    weights iteration kept as an independent cross-check.  Non-convergence at
    the iteration cap is reported through converged/gap_bits, with the
    best-so-far mixture returned.
    """
    poly = polytope if polytope is not None else enumerate_vertices(p.shape)
    if poly.shape != p.shape:
        raise ValueError(f"polytope shape {poly.shape} != behavior shape {p.shape}")
    w = _setting_weights(setting_weights, p.shape)
    target = (w[:, :, None, None] * p.probs).ravel()
    if solver == "cg":
        fn = kernels.solve_cg
    elif solver == "mw":
        fn = kernels.solve_mw
    else:
        raise ValueError(f"unknown solver {solver!r}")
    mu, gap_nats, iterations, converged = fn(
        target, poly.vertex_cells, tol_gap_bits * LN2, int(max_iterations)
    )
    mu = np.asarray(mu, dtype=float)
    distance = kl_divergence(p, poly.mix(mu), w)
    return KlResult(
        distance_bits=distance,
        weights=mu,
        gap_bits=float(gap_nats) / LN2,
        iterations=int(iterations),
        converged=bool(converged),
        solver=f"{solver}/{kernels.backend_name()}",
    )


MEMBERSHIP_TOL = 1e-9


def local_membership(
    p: BehaviorTable, polytope: LocalPolytope | None = None, tol: float = MEMBERSHIP_TOL
) -> tuple[bool, float]:
    """LP feasibility of writing p as a vertex mixture.

    Minimizes the sup-norm slack t with Vt mu within t of p; returns
    (t <= tol, t).
    """
    poly = polytope if polytope is not None else enumerate_vertices(p.shape)
    v = poly.vertex_matrix
    n_v, n_cells = v.shape
    flat = p.probs.ravel()
    # Variables [mu, t]: minimize t subject to |Vt mu - p| <= t, mu in simplex.
    ones = np.ones((n_cells, 1))
    a_ub = np.block([[v.T, -ones], [-v.T, -ones]])
    b_ub = np.concatenate([flat, -flat])
    a_eq = np.concatenate([np.ones(n_v), [0.0]])[None, :]
    cost = np.zeros(n_v + 1)
    cost[-1] = 1.0
    res = linprog(
        cost,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=[1.0],
        bounds=[(0.0, None)] * n_v + [(0.0, None)],
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"membership LP failed: {res.message}")
    slack = float(res.fun)
    return slack <= tol, slack


def separating_functional(
    p: BehaviorTable, result: KlResult, polytope: LocalPolytope | None = None,
    setting_weights=None,
) -> dict:
    """Bell functional certifying nonlocality, read off the projection gradient.

    With Q* the projection, the functional F(r) = sum_z w_z P_z r_z / Q*_z
    satisfies F(V) <= 1 + gap on every vertex while F(P) >= 1 + ln(2) D, so
    any behavior with distance above the gap is separated.  Returns the
    coefficient table and both sides of the separation.
    """
    poly = polytope if polytope is not None else enumerate_vertices(p.shape)
    w = _setting_weights(setting_weights, p.shape)
    target = (w[:, :, None, None] * p.probs).ravel()
    q = poly.mix(result.weights).probs.ravel()
    coeff = np.zeros_like(target)
    np.divide(target, q, out=coeff, where=target > 0.0)
    vertex_values = poly.vertex_matrix @ coeff
    return {
        "coefficients": coeff.reshape(p.shape),
        "value_at_p": float(coeff @ p.probs.ravel()),
        "local_maximum": float(vertex_values.max()),
    }


_PHASE_KEYS = ("alpha1", "alpha2", "beta1", "beta2")

# Looser projection settings used inside phase/gamma searches; final results
# are always re-solved at the defaults.
SEARCH_GAP_BITS = 1e-7
SEARCH_MAX_ITERATIONS = 30_000


def _scenario_distance(
    phases: np.ndarray,
    amplitudes: tuple[float, float, float],
    poly: LocalPolytope,
    tol_gap_bits: float,
    max_iterations: int,
) -> float:
    scenario = CglmpScenario(amplitudes, (phases[0], phases[1]), (phases[2], phases[3]))
    table = scenario_behavior(scenario)
    return kl_to_local(
        table, poly, tol_gap_bits=tol_gap_bits, max_iterations=max_iterations
    ).distance_bits


def _best_phases_for(
    amplitudes: tuple[float, float, float],
    poly: LocalPolytope,
    extra_starts: list[np.ndarray],
) -> tuple[np.ndarray, float]:
    def neg(v: np.ndarray) -> float:
        return -_scenario_distance(v, amplitudes, poly, SEARCH_GAP_BITS, SEARCH_MAX_ITERATIONS)

    # Phase accuracy well beyond the distance tolerances; the projection noise
    # floor (SEARCH_GAP_BITS) makes tighter simplex tolerances pointless.
    starts = [np.array(CANONICAL_PHASES)] + extra_starts
    x, f, _, _, _ = multistart_minimize(neg, starts, xatol=1e-5, fatol=1e-9, max_iterations=300)
    return x, -f


def optimize_kl(gamma: float | None = None, seed: int | None = None) -> OptimizationResult:
    """Maximize the KL distance over the four phases, and over gamma when free.

    gamma fixed: Nelder-Mead on the phases from the canonical quadruple.
    gamma free: coarse grid over [0, 1.5] with warm-started phase searches,
    golden-section refinement, then a tight final projection.
    """
    poly = enumerate_vertices((2, 2, 3, 3))

    if gamma is not None:
        best_phases, _ = _best_phases_for(_amps(gamma), poly, [])
        return _final_result(gamma, best_phases, poly, seed)

    warm: list[np.ndarray] = []

    def neg_best(g: float) -> float:
        phases, value = _best_phases_for(_amps(g), poly, warm[:1])
        warm[:] = [phases]
        return -value

    grid = np.linspace(0.05, 1.5, 16)
    values = [neg_best(g) for g in grid]
    i = int(np.argmin(values))
    lo = grid[max(0, i - 1)]
    hi = grid[min(len(grid) - 1, i + 1)]
    g_best, _, _ = golden_section_minimize(neg_best, lo, hi, tol=1e-4)
    best_phases, _ = _best_phases_for(_amps(g_best), poly, warm[:1])
    return _final_result(g_best, best_phases, poly, seed)


def _amps(gamma: float) -> tuple[float, float, float]:
    c = np.diag(make_gamma_state(gamma).amplitudes).real
    return (float(c[0]), float(c[1]), float(c[2]))


def _final_result(
    gamma: float, phases: np.ndarray, poly: LocalPolytope, seed: int | None
) -> OptimizationResult:
    scenario = CglmpScenario(_amps(gamma), (phases[0], phases[1]), (phases[2], phases[3]))
    table = scenario_behavior(scenario)
    final = kl_to_local(table, poly)
    params = {"gamma": float(gamma)}
    params.update(zip(_PHASE_KEYS, (wrap_angle(v) for v in phases)))
    return OptimizationResult(
        value=final.distance_bits,
        params=params,
        iterations=final.iterations,
        n_evaluations=final.iterations,
        converged=final.converged,
        gap=final.gap_bits,
        seed=seed,
        extras={"solver": final.solver},
    )
