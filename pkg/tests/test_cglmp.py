"""Three-outcome Bell combination: closed form, Born rule, and optimizers."""

import math

import numpy as np
import pytest

from nonlocality.cglmp import (
    CANONICAL_PHASES,
    CglmpScenario,
    analytic_behavior,
    analytic_cglmp_value,
    analytic_probability,
    cglmp_value,
    diagonal_amplitudes,
    event_probability,
    optimize_cglmp,
    optimize_cglmp_state_and_settings,
    scenario_behavior,
)
from nonlocality.polytope import enumerate_vertices
from nonlocality.states import make_gamma_state, make_hardy_state, make_max_entangled

MAX_ENT_AMPS = (1.0 / math.sqrt(3.0),) * 3
MAX_ENT_VALUE = 4.0 * (2.0 * math.sqrt(3.0) + 3.0) / 9.0


def _canonical_scenario(amps):
    a1, a2, b1, b2 = CANONICAL_PHASES
    return CglmpScenario(amplitudes=amps, alpha=(a1, a2), beta=(b1, b2))


def _random_scenario(rng):
    raw = rng.uniform(0.2, 1.0, size=3)
    raw /= np.linalg.norm(raw)
    return CglmpScenario(
        amplitudes=tuple(raw),
        alpha=(float(rng.uniform(-math.pi, math.pi)), float(rng.uniform(-math.pi, math.pi))),
        beta=(float(rng.uniform(-math.pi, math.pi)), float(rng.uniform(-math.pi, math.pi))),
    )


def test_scenario_validates_amplitudes():
    with pytest.raises(ValueError):
        CglmpScenario(amplitudes=(1.0, 1.0, 1.0), alpha=(0.0, 0.0), beta=(0.0, 0.0))


def test_canonical_phases_on_the_maximally_entangled_pair():
    scenario = _canonical_scenario(MAX_ENT_AMPS)
    assert abs(analytic_cglmp_value(scenario) - MAX_ENT_VALUE) < 1e-12
    assert abs(cglmp_value(scenario_behavior(scenario)) - MAX_ENT_VALUE) < 1e-9


def test_analytic_probabilities_match_the_projector_route():
    rng = np.random.default_rng(47)
    worst = 0.0
    for _ in range(30):
        scenario = _random_scenario(rng)
        born = scenario_behavior(scenario).probs
        closed = analytic_behavior(scenario).probs
        worst = max(worst, float(np.max(np.abs(born - closed))))
    assert worst < 1e-10


def test_event_probability_is_three_equal_pairs():
    rng = np.random.default_rng(53)
    scenario = _random_scenario(rng)
    table = analytic_behavior(scenario)
    for x in range(2):
        for y in range(2):
            total = 0.0
            for delta in range(3):
                pair = analytic_probability(scenario, x, y, delta)
                assert abs(event_probability(table, x, y, delta) - 3.0 * pair) < 1e-12
                total += 3.0 * pair
            assert abs(total - 1.0) < 1e-12


def test_deterministic_strategies_reach_exactly_two():
    poly = enumerate_vertices((2, 2, 3, 3))
    best = max(cglmp_value(poly.vertex_table(i)) for i in range(poly.n_vertices))
    assert best == 2.0


def test_value_is_invariant_under_opposite_phase_shifts():
    # alpha -> alpha + c, beta -> beta - c changes nothing observable
    rng = np.random.default_rng(59)
    for _ in range(20):
        scenario = _random_scenario(rng)
        c = float(rng.uniform(-math.pi, math.pi))
        shifted = CglmpScenario(
            amplitudes=scenario.amplitudes,
            alpha=tuple(a + c for a in scenario.alpha),
            beta=tuple(b - c for b in scenario.beta),
        )
        assert abs(analytic_cglmp_value(shifted) - analytic_cglmp_value(scenario)) < 1e-12


def test_diagonal_amplitudes_round_trip_and_rejection():
    state = make_gamma_state(0.7)
    amps = diagonal_amplitudes(state)
    assert np.allclose(amps, np.diag(state.amplitudes).real, atol=1e-14)
    with pytest.raises(ValueError):
        diagonal_amplitudes(make_hardy_state())


def test_phase_optimizer_recovers_the_canonical_optimum():
    result = optimize_cglmp(make_max_entangled(3), seed=0)
    assert result.converged
    assert abs(result.value - MAX_ENT_VALUE) < 1e-6
    for v in result.params.values():
        assert -math.pi < v <= math.pi


def test_joint_optimizer_prefers_a_partially_entangled_state():
    result = optimize_cglmp_state_and_settings(seed=0)
    assert abs(result.value - (1.0 + math.sqrt(11.0 / 3.0))) < 1e-5
    assert abs(result.params["gamma"] - (math.sqrt(11.0) - math.sqrt(3.0)) / 2.0) < 1e-3
    assert result.value > MAX_ENT_VALUE + 0.04
