"""Born-rule behavior tables, marginals, and correlators."""

import json
import math

import numpy as np
import pytest

from nonlocality.behavior import BehaviorTable, behavior, correlator, pauli_expectation
from nonlocality.measurements import GeneralMeasurement, bloch_from_angles, bloch_x, bloch_z
from nonlocality.states import BipartitePureState, make_hardy_state, make_theta_state


def _random_qubit_behavior(rng):
    th = float(rng.uniform(0.0, math.pi / 4.0))
    state = make_theta_state(th)
    ms = [
        bloch_from_angles(float(rng.uniform(0.0, math.pi)), float(rng.uniform(-math.pi, math.pi))).to_measurement()
        for _ in range(4)
    ]
    return behavior(state, ms[:2], ms[2:])


def test_table_rejects_genuinely_negative_probabilities():
    probs = np.array([[[[-1e-6, 0.5 + 1e-6], [0.25, 0.25]]]])
    with pytest.raises(ValueError):
        BehaviorTable(probs)


def test_table_clamps_rounding_noise_to_zero():
    probs = np.array([[[[-1e-13, 0.5], [0.25, 0.25]]]])
    table = BehaviorTable(probs)
    assert table.probs[0, 0, 0, 0] == 0.0


def test_table_rejects_unnormalized_setting_pairs():
    probs = np.full((1, 1, 2, 2), 0.3)
    with pytest.raises(ValueError):
        BehaviorTable(probs)


def test_marginals_sum_out_the_other_party():
    rng = np.random.default_rng(21)
    for _ in range(20):
        table = _random_qubit_behavior(rng)
        assert np.allclose(table.marginal_a(), table.probs.sum(axis=3), atol=1e-14)
        assert np.allclose(table.marginal_b(), table.probs.sum(axis=2), atol=1e-14)


def test_born_rule_tables_are_nonsignaling():
    rng = np.random.default_rng(23)
    worst = 0.0
    for _ in range(40):
        worst = max(worst, _random_qubit_behavior(rng).nonsignaling_deviation())
    assert worst < 1e-12


def test_signaling_table_has_positive_deviation():
    # Alice's marginal leaks Bob's setting choice
    probs = np.zeros((2, 2, 2, 2))
    probs[:, 0, 0, 0] = 1.0
    probs[:, 1, 1, 0] = 1.0
    assert BehaviorTable(probs).nonsignaling_deviation() > 0.9


def test_behavior_rejects_dimension_mismatch():
    state = make_theta_state(0.4)
    qutrit = GeneralMeasurement(np.eye(3, dtype=complex))
    qubit = GeneralMeasurement(np.eye(2, dtype=complex))
    with pytest.raises(ValueError):
        behavior(state, [qutrit], [qubit])


def test_pauli_expectation_is_bounded_by_one():
    rng = np.random.default_rng(29)
    for _ in range(30):
        raw = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        raw /= np.linalg.norm(raw)
        state = BipartitePureState(raw)
        a = bloch_from_angles(float(rng.uniform(0, math.pi)), float(rng.uniform(-math.pi, math.pi)))
        b = bloch_from_angles(float(rng.uniform(0, math.pi)), float(rng.uniform(-math.pi, math.pi)))
        assert abs(pauli_expectation(state, a, b)) <= 1.0 + 1e-12


def test_closed_form_correlator_matches_pauli_expectation():
    rng = np.random.default_rng(31)
    worst = 0.0
    for _ in range(50):
        th = float(rng.uniform(0.0, math.pi / 4.0))
        state = make_theta_state(th)
        a = bloch_from_angles(float(rng.uniform(0, math.pi)), float(rng.uniform(-math.pi, math.pi)))
        b = bloch_from_angles(float(rng.uniform(0, math.pi)), float(rng.uniform(-math.pi, math.pi)))
        worst = max(worst, abs(correlator(state, a, b) - pauli_expectation(state, a, b)))
    assert worst < 1e-12


def test_correlator_rejects_states_outside_its_closed_form():
    with pytest.raises(ValueError):
        correlator(make_hardy_state(), bloch_z(), bloch_x())


def test_table_serializes_to_json():
    rng = np.random.default_rng(37)
    table = _random_qubit_behavior(rng)
    assert json.dumps(table.to_json_dict())
