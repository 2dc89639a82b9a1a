"""Three-outcome Bell combination for qutrit pairs with phase-parametrized bases."""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .behavior import BehaviorTable, behavior
from .measurements import PhaseSetting, cglmp_projectors
from .optimize import OptimizationResult, golden_section_minimize, multistart_minimize, wrap_angle
from .states import BipartitePureState, make_gamma_state

LOCAL_BOUND = 2.0
DIAGONAL_TOL = 1e-12

# Phase quadruple (alpha1, alpha2, beta1, beta2) maximizing the combination
# for the uniform-amplitude state; optimal phases for other diagonal states
# coincide with it up to the alpha_j + beta_k gauge freedom.
CANONICAL_PHASES = (0.0, math.pi / 3.0, -math.pi / 6.0, math.pi / 6.0)

GRID_POINTS = 24


@dataclass(frozen=True)
class CglmpScenario:
    """Diagonal qutrit-pair amplitudes plus one phase per setting and party."""

    amplitudes: tuple[float, float, float]
    alpha: tuple[float, float]
    beta: tuple[float, float]

    def __post_init__(self):
        c = tuple(float(v) for v in self.amplitudes)
        if len(c) != 3 or any(v < 0 for v in c):
            raise ValueError("amplitudes must be three nonnegative reals")
        if abs(sum(v * v for v in c) - 1.0) > 1e-12:
            raise ValueError("amplitudes must be normalized")
        object.__setattr__(self, "amplitudes", c)
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        object.__setattr__(self, "beta", tuple(float(v) for v in self.beta))

    @property
    def state(self) -> BipartitePureState:
        return BipartitePureState(np.diag(np.array(self.amplitudes, dtype=complex)))


def diagonal_amplitudes(state: BipartitePureState) -> tuple[float, ...]:
    """Schmidt-diagonal amplitudes of a state; rejects non-diagonal input."""
    c = state.amplitudes
    off = c - np.diag(np.diag(c))
    if np.max(np.abs(off)) > DIAGONAL_TOL:
        raise ValueError("state is not Schmidt-diagonal in the computational basis")
    d = np.diag(c)
    if np.max(np.abs(d.imag)) > DIAGONAL_TOL or np.min(d.real) < -DIAGONAL_TOL:
        raise ValueError("Schmidt amplitudes must be real and nonnegative")
    return tuple(float(v) for v in d.real)


def scenario_measurements(scenario: CglmpScenario):
    """The two projector triples per party for this scenario."""
    ma = [cglmp_projectors(PhaseSetting("A", phase)) for phase in scenario.alpha]
    mb = [cglmp_projectors(PhaseSetting("B", phase)) for phase in scenario.beta]
    return ma, mb


def scenario_behavior(scenario: CglmpScenario) -> BehaviorTable:
    """Born-rule behavior of the scenario (projector route)."""
    ma, mb = scenario_measurements(scenario)
    return behavior(scenario.state, ma, mb)


def analytic_probability(scenario: CglmpScenario, x: int, y: int, delta: int) -> float:
    """Probability of one outcome pair (a, b) with a - b = delta mod 3.

    (1/9) sum_{n,m=0..2} c_n c_m cos[(n - m)(alpha_x + beta_y + 2 pi delta / 3)].
    All three pairs sharing the same delta are equally likely, so the event
    a = b + delta has three times this probability.
    """
    c = scenario.amplitudes
    phi = scenario.alpha[x] + scenario.beta[y] + 2.0 * math.pi * delta / 3.0
    total = 0.0
    for n in range(3):
        for m in range(3):
            total += c[n] * c[m] * math.cos((n - m) * phi)
    return total / 9.0


def analytic_behavior(scenario: CglmpScenario) -> BehaviorTable:
    """Full behavior table assembled from the closed-form pair probabilities."""
    probs = np.empty((2, 2, 3, 3))
    for x in range(2):
        for y in range(2):
            for a in range(3):
                for b in range(3):
                    probs[x, y, a, b] = analytic_probability(scenario, x, y, (a - b) % 3)
    return BehaviorTable(probs)


def event_probability(table: BehaviorTable, x: int, y: int, delta: int) -> float:
    """Pr[a = b + delta mod 3] under setting pair (x, y)."""
    p = table.probs
    return float(sum(p[x, y, (b + delta) % 3, b] for b in range(3)))


# Terms of the combination: (x, y, delta, sign).
_TERMS = (
    (0, 0, 0, +1.0),
    (0, 1, 0, +1.0),
    (1, 0, 0, +1.0),
    (1, 1, 2, +1.0),
    (0, 0, 1, -1.0),
    (0, 1, 2, -1.0),
    (1, 0, 2, -1.0),
    (1, 1, 0, -1.0),
)


def cglmp_value(table: BehaviorTable) -> float:
    """Eight-term three-outcome Bell combination; local bound 2."""
    if table.shape != (2, 2, 3, 3):
        raise ValueError(f"expected a (2, 2, 3, 3) table, got {table.shape}")
    return float(
        sum(sign * event_probability(table, x, y, delta) for x, y, delta, sign in _TERMS)
    )


def _pair_sums(c: tuple[float, float, float]) -> tuple[float, float]:
    """Coefficients (p, q) of the event probability h(phi) = (1 + 2p cos phi + 2q cos 2phi)/3."""
    return c[0] * c[1] + c[1] * c[2], c[0] * c[2]


def _value_of_phases(a1: float, a2: float, b1: float, b2: float, p: float, q: float) -> float:
    third = 2.0 * math.pi / 3.0

    def h(phi: float) -> float:
        return (1.0 + 2.0 * p * math.cos(phi) + 2.0 * q * math.cos(2.0 * phi)) / 3.0

    return (
        h(a1 + b1) - h(a1 + b1 + third)
        + h(a1 + b2) - h(a1 + b2 + 2.0 * third)
        + h(a2 + b1) - h(a2 + b1 + 2.0 * third)
        + h(a2 + b2 + 2.0 * third) - h(a2 + b2)
    )


def analytic_cglmp_value(scenario: CglmpScenario) -> float:
    """Combination value straight from the closed-form probabilities."""
    p, q = _pair_sums(scenario.amplitudes)
    return _value_of_phases(
        scenario.alpha[0], scenario.alpha[1], scenario.beta[0], scenario.beta[1], p, q
    )


def _grid_best(p: float, q: float) -> np.ndarray:
    """Best phase quadruple on a uniform grid, exploiting the sum structure."""
    grid = np.arange(GRID_POINTS) * (2.0 * math.pi / GRID_POINTS)
    third = 2.0 * math.pi / 3.0
    h = (1.0 + 2.0 * p * np.cos(grid) + 2.0 * q * np.cos(2.0 * grid)) / 3.0

    def h_at(shift: float) -> np.ndarray:
        return (1.0 + 2.0 * p * np.cos(grid + shift) + 2.0 * q * np.cos(2.0 * (grid + shift))) / 3.0

    t00 = h - h_at(third)
    t01 = h - h_at(2.0 * third)
    t10 = t01.copy()
    t11 = h_at(2.0 * third) - h
    s = (np.arange(GRID_POINTS)[:, None] + np.arange(GRID_POINTS)[None, :]) % GRID_POINTS
    value = (
        t00[s][:, None, :, None]
        + t01[s][:, None, None, :]
        + t10[s][None, :, :, None]
        + t11[s][None, :, None, :]
    )
    i1, i2, j1, j2 = np.unravel_index(int(np.argmax(value)), value.shape)
    return grid[[i1, i2, j1, j2]].astype(float)


_PHASE_KEYS = ("alpha1", "alpha2", "beta1", "beta2")


def optimize_cglmp(state: BipartitePureState, seed: int | None = None) -> OptimizationResult:
    """Maximize the combination over the four phases for a fixed diagonal state.

    Coarse grid over all four axes, then Nelder-Mead polish; the canonical
    quadruple is always among the polish starts.
    """
    c = diagonal_amplitudes(state)
    if len(c) != 3:
        raise ValueError("expected a qutrit-pair state")
    p, q = _pair_sums(c)

    def neg(v: np.ndarray) -> float:
        return -_value_of_phases(v[0], v[1], v[2], v[3], p, q)

    starts = [_grid_best(p, q), np.array(CANONICAL_PHASES)]
    x, f, n_iter, n_eval, converged = multistart_minimize(neg, starts)
    scenario = CglmpScenario(c, (x[0], x[1]), (x[2], x[3]))
    value = analytic_cglmp_value(scenario)
    return OptimizationResult(
        value=value,
        params=dict(zip(_PHASE_KEYS, (wrap_angle(v) for v in x))),
        iterations=n_iter,
        n_evaluations=n_eval,
        converged=converged,
        seed=seed,
    )


GAMMA_RANGE = (0.0, 1.5)
GAMMA_GRID_POINTS = 31


def optimize_cglmp_state_and_settings(seed: int | None = None) -> OptimizationResult:
    """Maximize over the diagonal-state parameter gamma and all four phases.

    Coarse gamma grid over [0, 1.5], then golden-section refinement around the
    best point; every gamma evaluation re-optimizes the phases.
    """

    def best_value(gamma: float) -> float:
        return -optimize_cglmp(make_gamma_state(gamma), seed=seed).value

    grid = np.linspace(GAMMA_RANGE[0], GAMMA_RANGE[1], GAMMA_GRID_POINTS)
    values = [best_value(g) for g in grid]
    i = int(np.argmin(values))
    lo = grid[max(0, i - 1)]
    hi = grid[min(len(grid) - 1, i + 1)]
    gamma, _, n_gamma_eval = golden_section_minimize(best_value, lo, hi, tol=1e-7)

    inner = optimize_cglmp(make_gamma_state(gamma), seed=seed)
    params = {"gamma": float(gamma), **inner.params}
    return OptimizationResult(
        value=inner.value,
        params=params,
        iterations=inner.iterations,
        n_evaluations=inner.n_evaluations + n_gamma_eval + GAMMA_GRID_POINTS,
        converged=inner.converged,
        seed=seed,
    )
