"""Detector-efficiency thresholds for Clauser-Horne tests with undetected events discarded."""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .behavior import _theta_state_sin2theta, correlator
from .chsh import ChshSettings, chsh_optimal_settings, chsh_value, settings_from_params
from .measurements import BlochMeasurement
from .optimize import OptimizationResult, multistart_minimize, wrap_angle
from .states import BipartitePureState, make_theta_state

VIOLATION_TOL = 1e-9

# A local model reproduces the maximally entangled state's statistics up to
# this detection efficiency, so any threshold at or below it is an anomaly
# only non-maximal entanglement reaches.
LOCAL_MODEL_EFFICIENCY = 0.75


class NoViolationError(ValueError):
    """Raised when settings give no CHSH violation, so no finite efficiency helps."""


@dataclass(frozen=True)
class DetectionModel:
    """theta-state source watched by detectors of efficiency eta."""

    theta: float
    settings: ChshSettings
    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")


@dataclass(frozen=True)
class DetectionProbabilities:
    """The six detected-event probabilities entering the CH combination."""

    p_a1: float
    p_b1: float
    p_11: float
    p_12: float
    p_21: float
    p_22: float


def detection_probabilities(model: DetectionModel) -> DetectionProbabilities:
    """Singles and ++ coincidences, scaled by eta and eta^2 respectively."""
    state = make_theta_state(model.theta)
    c2t = math.cos(2.0 * model.theta)
    eta = model.eta
    s = model.settings

    def single(m: BlochMeasurement) -> float:
        return eta * 0.5 * (1.0 + c2t * m.z)

    def joint(a: BlochMeasurement, b: BlochMeasurement) -> float:
        return eta * eta * 0.25 * (1.0 + c2t * (a.z + b.z) + correlator(state, a, b))

    return DetectionProbabilities(
        p_a1=single(s.a1),
        p_b1=single(s.b1),
        p_11=joint(s.a1, s.b1),
        p_12=joint(s.a1, s.b2),
        p_21=joint(s.a2, s.b1),
        p_22=joint(s.a2, s.b2),
    )


def ch_value(probs: DetectionProbabilities) -> float:
    """Clauser-Horne combination; positive values are nonlocal."""
    return (
        probs.p_11 + probs.p_12 + probs.p_21 - probs.p_22 - probs.p_a1 - probs.p_b1
    )


def critical_efficiency_at(theta: float, settings: ChshSettings) -> float:
    """Smallest eta at which these settings still violate CH.

    eta_c = (4 + 2 cos(2 theta)(a1_z + b1_z)) / (2 + 2 cos(2 theta)(a1_z + b1_z) + CHSH).
    """
    state = make_theta_state(theta)
    chsh = chsh_value(state, settings)
    if chsh <= 2.0 + VIOLATION_TOL:
        raise NoViolationError(
            f"settings give CHSH = {chsh}, no violation, no finite threshold"
        )
    k = math.cos(2.0 * theta) * (settings.a1.z + settings.b1.z)
    return (4.0 + 2.0 * k) / (2.0 + 2.0 * k + chsh)


def _eta_c_of_angles(x: np.ndarray, s: float, c2t: float) -> float:
    ta1, pa1, ta2, pa2, tb1, pb1, tb2, pb2 = x
    a1 = (math.sin(ta1) * math.cos(pa1), math.sin(ta1) * math.sin(pa1), math.cos(ta1))
    a2 = (math.sin(ta2) * math.cos(pa2), math.sin(ta2) * math.sin(pa2), math.cos(ta2))
    b1 = (math.sin(tb1) * math.cos(pb1), math.sin(tb1) * math.sin(pb1), math.cos(tb1))
    b2 = (math.sin(tb2) * math.cos(pb2), math.sin(tb2) * math.sin(pb2), math.cos(tb2))

    def e(a, b):
        return a[2] * b[2] + s * (a[0] * b[0] - a[1] * b[1])

    chsh = e(a1, b1) + e(a1, b2) + e(a2, b1) - e(a2, b2)
    if chsh <= 2.0 + VIOLATION_TOL:
        # Continuous penalty: eta_c -> 1 as the violation vanishes.
        return 1.0 + (2.0 - chsh)
    k = c2t * (a1[2] + b1[2])
    return (4.0 + 2.0 * k) / (2.0 + 2.0 * k + chsh)


def _settings_to_angles(settings: ChshSettings) -> np.ndarray:
    out = []
    for m in (settings.a1, settings.a2, settings.b1, settings.b2):
        out.append(math.acos(max(-1.0, min(1.0, m.z))))
        out.append(math.atan2(m.y, m.x))
    return np.array(out)


N_RANDOM_STARTS = 22


def _starts(theta: float, seed: int | None) -> list[np.ndarray]:
    starts = [
        _settings_to_angles(chsh_optimal_settings(theta)),
        np.array([0.0, 0.0, math.pi / 2, 0.0, math.pi / 4, 0.0, math.pi / 4, math.pi]),
    ]
    # Eberhard-like geometries: first settings hugging a pole so the singles
    # nearly cancel, second settings splayed; both poles covered.
    for delta in (0.05, 0.15, 0.35, 0.7):
        starts.append(np.array(
            [math.pi - delta, 0.0, math.pi - 3 * delta, math.pi,
             math.pi - delta, math.pi, math.pi - 3 * delta, 0.0]
        ))
        starts.append(np.array(
            [delta, 0.0, 3 * delta, math.pi, delta, math.pi, 3 * delta, 0.0]
        ))
    rng = np.random.default_rng(0 if seed is None else seed)
    for _ in range(N_RANDOM_STARTS):
        polar = rng.uniform(0.0, math.pi, size=4)
        azimuth = rng.uniform(0.0, 2.0 * math.pi, size=4)
        starts.append(np.column_stack([polar, azimuth]).ravel())
    return starts


def optimize_critical_efficiency(theta: float, seed: int | None = None) -> OptimizationResult:
    """Minimize the critical efficiency over all eight Bloch angles."""
    state = make_theta_state(theta)
    s = _theta_state_sin2theta(state)
    c2t = math.cos(2.0 * theta)
    x, f, n_iter, n_eval, converged = multistart_minimize(
        lambda v: _eta_c_of_angles(v, s, c2t), _starts(theta, seed)
    )
    keys = (
        "a1_polar", "a1_azimuth", "a2_polar", "a2_azimuth",
        "b1_polar", "b1_azimuth", "b2_polar", "b2_azimuth",
    )
    params = dict(zip(keys, (wrap_angle(v) for v in x)))
    settings = settings_from_params(params)
    eta_c = critical_efficiency_at(theta, settings)
    return OptimizationResult(
        value=eta_c,
        params=params,
        iterations=n_iter,
        n_evaluations=n_eval,
        converged=converged,
        seed=seed,
        extras={
            "theta": theta,
            "chsh_at_optimum": chsh_value(state, settings),
            "beats_local_model_threshold": bool(eta_c <= LOCAL_MODEL_EFFICIENCY),
        },
    )
