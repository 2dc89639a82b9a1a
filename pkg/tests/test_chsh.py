"""CHSH values, optimal settings, and the entanglement scan."""

import math

import numpy as np

from nonlocality.chsh import (
    LOCAL_BOUND,
    TSIRELSON_BOUND,
    analytic_chsh_maximum,
    chsh_local_bound,
    chsh_optimal_settings,
    chsh_value,
    optimize_chsh,
    settings_from_params,
)
from nonlocality.states import make_theta_state


def test_local_bound_is_two_exactly():
    assert chsh_local_bound() == 2.0
    assert LOCAL_BOUND == 2.0


def test_analytic_maximum_endpoints_and_frozen_interior_point():
    assert analytic_chsh_maximum(0.0) == 2.0
    assert abs(analytic_chsh_maximum(math.pi / 4.0) - TSIRELSON_BOUND) < 1e-15
    # frozen value of 2 sqrt(1 + sin^2 0.6)
    assert abs(analytic_chsh_maximum(0.3) - 2.2967987484859558) < 1e-12


def test_optimal_settings_achieve_the_analytic_maximum():
    for th in np.linspace(0.0, math.pi / 4.0, 25):
        th = float(th)
        value = chsh_value(make_theta_state(th), chsh_optimal_settings(th))
        assert abs(value - analytic_chsh_maximum(th)) < 1e-12


def test_optimizer_recovers_the_analytic_curve():
    for th in (0.0, 0.2, math.pi / 8.0, math.pi / 4.0):
        result = optimize_chsh(th, seed=0)
        assert result.converged
        assert abs(result.value - analytic_chsh_maximum(th)) < 1e-9


def test_optimizer_never_exceeds_the_quantum_ceiling():
    for th in (0.1, 0.5, math.pi / 4.0):
        result = optimize_chsh(th, seed=0)
        assert result.value <= TSIRELSON_BOUND + 1e-9


def test_optimizer_params_reproduce_the_reported_value():
    th = 0.35
    result = optimize_chsh(th, seed=0)
    settings = settings_from_params(result.params)
    assert abs(chsh_value(make_theta_state(th), settings) - result.value) < 1e-12
    # reported angles are canonical representatives
    for v in result.params.values():
        assert -math.pi < v <= math.pi


def test_partially_entangled_states_still_violate():
    # every theta > 0 gives a value above the deterministic bound
    for th in (0.05, 0.15, 0.3):
        assert analytic_chsh_maximum(th) > 2.0
        result = optimize_chsh(th, seed=0)
        assert result.value > 2.0
