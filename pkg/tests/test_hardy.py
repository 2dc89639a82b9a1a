"""Hardy paradox: certificate, local-model contradiction, and optimizer."""

import json
import math

import numpy as np
import pytest

from nonlocality.hardy import (
    hardy_certificate,
    hardy_scan,
    lhv_contradiction,
    optimize_hardy_probability,
)
from nonlocality.states import make_hardy_state, make_theta_state

PEAK_PROBABILITY = (5.0 * math.sqrt(5.0) - 11.0) / 2.0  # exact optimum over states


def test_fixed_state_certificate_hits_one_twelfth():
    cert = hardy_certificate(make_hardy_state())
    assert cert.holds
    assert abs(cert.p_xx_mm - 1.0 / 12.0) < 1e-12
    for zero in cert.zeros():
        assert abs(zero) < 1e-12
    assert json.dumps(cert.to_json_dict())


def test_certificate_fails_on_the_maximally_entangled_state():
    cert = hardy_certificate(make_theta_state(math.pi / 4.0))
    assert not cert.holds


def test_local_models_assign_probability_zero():
    analysis = lhv_contradiction()
    assert analysis.forces_zero
    assert analysis.survivors
    assert not analysis.xx_mm_survivors


def test_dropping_any_zero_constraint_breaks_the_contradiction():
    for kept in (("xz", "zx"), ("xz", "zz"), ("zx", "zz")):
        assert not lhv_contradiction(kept).forces_zero


def test_unknown_constraint_names_are_rejected():
    with pytest.raises(ValueError):
        lhv_contradiction(("xz", "bogus"))


def test_optimizer_regression_at_interior_theta():
    result = optimize_hardy_probability(0.3, seed=3)
    assert result.converged
    assert abs(result.value - 0.06715489401700209) < 1e-9
    assert result.extras["zero_residual"] < 1e-9


def test_paradox_vanishes_at_product_and_maximally_entangled_states():
    for th in (0.0, math.pi / 4.0):
        result = optimize_hardy_probability(th, seed=3)
        assert result.value <= 1e-9
        assert result.extras["zero_residual"] < 1e-9


def test_peak_probability_matches_the_golden_ratio_expression():
    result = optimize_hardy_probability(0.434692, seed=3)
    assert abs(result.value - PEAK_PROBABILITY) < 5e-7


def test_scan_rows_carry_the_interior_maximum():
    thetas = np.array([0.1, 0.4347, 0.7])
    rows = hardy_scan(thetas, seed=3)
    assert [r.theta for r in rows] == pytest.approx(list(thetas))
    assert all(r.probability >= 0.0 for r in rows)
    assert all(r.holds for r in rows)
    probs = [r.probability for r in rows]
    assert probs[1] == max(probs)
    assert probs[1] > 0.09
