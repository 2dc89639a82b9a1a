"""CHSH values for two-qubit states: closed-form curve, brute-force bound, free optimization."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
import math

import numpy as np

from .behavior import _theta_state_sin2theta, correlator
from .measurements import BlochMeasurement, bloch_from_angles, bloch_x, bloch_z
from .optimize import OptimizationResult, multistart_minimize, wrap_angle
from .states import BipartitePureState, make_theta_state

LOCAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class ChshSettings:
    """Two Bloch settings per party."""

    a1: BlochMeasurement
    a2: BlochMeasurement
    b1: BlochMeasurement
    b2: BlochMeasurement


def chsh_value(state: BipartitePureState, settings: ChshSettings) -> float:
    """E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)."""
    return (
        correlator(state, settings.a1, settings.b1)
        + correlator(state, settings.a1, settings.b2)
        + correlator(state, settings.a2, settings.b1)
        - correlator(state, settings.a2, settings.b2)
    )


def chsh_local_bound() -> float:
    """Maximum of the CHSH combination over all deterministic +-1 assignments."""
    best = -math.inf
    for a1, a2, b1, b2 in product((-1, 1), repeat=4):
        best = max(best, a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2)
    return float(best)


def analytic_chsh_maximum(theta: float) -> float:
    """2 sqrt(1 + sin^2(2 theta)), the quantum maximum for cos|00>+sin|11>."""
    s = math.sin(2.0 * theta)
    return 2.0 * math.sqrt(1.0 + s * s)


def chsh_optimal_settings(theta: float) -> ChshSettings:
    """Settings achieving the analytic maximum at this theta.

    a1 = z, a2 = x; Bob's settings tilt toward x by chi = atan(sin 2 theta).
    At theta = pi/4 this reduces to the familiar (z +- x)/sqrt(2) pair.
    """
    chi = math.atan(math.sin(2.0 * theta))
    return ChshSettings(
        a1=bloch_z(),
        a2=bloch_x(),
        b1=BlochMeasurement((math.sin(chi), 0.0, math.cos(chi))),
        b2=BlochMeasurement((-math.sin(chi), 0.0, math.cos(chi))),
    )


def _neg_chsh_of_angles(x: np.ndarray, s: float) -> float:
    ta1, pa1, ta2, pa2, tb1, pb1, tb2, pb2 = x
    a1 = (math.sin(ta1) * math.cos(pa1), math.sin(ta1) * math.sin(pa1), math.cos(ta1))
    a2 = (math.sin(ta2) * math.cos(pa2), math.sin(ta2) * math.sin(pa2), math.cos(ta2))
    b1 = (math.sin(tb1) * math.cos(pb1), math.sin(tb1) * math.sin(pb1), math.cos(tb1))
    b2 = (math.sin(tb2) * math.cos(pb2), math.sin(tb2) * math.sin(pb2), math.cos(tb2))

    def e(a, b):
        return a[2] * b[2] + s * (a[0] * b[0] - a[1] * b[1])

    return -(e(a1, b1) + e(a1, b2) + e(a2, b1) - e(a2, b2))


_ANGLE_KEYS = (
    "a1_polar", "a1_azimuth", "a2_polar", "a2_azimuth",
    "b1_polar", "b1_azimuth", "b2_polar", "b2_azimuth",
)


def settings_from_params(params: dict[str, float]) -> ChshSettings:
    """Rebuild Bloch settings from the angle dictionary of an optimizer result."""
    a1, a2, b1, b2 = (
        bloch_from_angles(params[f"{name}_polar"], params[f"{name}_azimuth"])
        for name in ("a1", "a2", "b1", "b2")
    )
    return ChshSettings(a1=a1, a2=a2, b1=b1, b2=b2)


def _corner_starts() -> list[np.ndarray]:
    """Settings at +-z: the deterministic extremes of the correlator.

    The value is invariant under negating all four Bloch vectors at once
    (each correlator is bilinear), so corners pair up; keeping a1 = +z
    covers every class with half the starts.
    """
    starts = []
    for signs in product((0.0, math.pi), repeat=3):
        starts.append(np.array([0.0, 0.0, signs[0], 0.0, signs[1], 0.0, signs[2], 0.0]))
    return starts


def optimize_chsh(theta: float, seed: int | None = None) -> OptimizationResult:
    """Maximize CHSH over all eight Bloch angles for cos|00>+sin|11>.

    Multi-start Nelder-Mead: the deterministic corner settings plus the
    known optimum.  The y-components are free, so a planar maximum is a
    result, not an assumption.
    """
    state = make_theta_state(theta)
    s = _theta_state_sin2theta(state)
    chi = math.atan(s)
    known = np.array([0.0, 0.0, math.pi / 2, 0.0, chi, 0.0, chi, math.pi])
    # Fixed pi/4-optimal quadruple, a useful start away from theta = pi/4 too.
    fixed = np.array([0.0, 0.0, math.pi / 2, 0.0, math.pi / 4, 0.0, math.pi / 4, math.pi])
    starts = _corner_starts() + [fixed, known]
    x, f, n_iter, n_eval, converged = multistart_minimize(
        lambda v: _neg_chsh_of_angles(v, s), starts
    )
    params = dict(zip(_ANGLE_KEYS, (wrap_angle(v) for v in x)))
    value = chsh_value(state, settings_from_params(params))
    return OptimizationResult(
        value=value,
        params=params,
        iterations=n_iter,
        n_evaluations=n_eval,
        converged=converged,
        seed=seed,
        extras={"theta": theta, "analytic": analytic_chsh_maximum(theta)},
    )
