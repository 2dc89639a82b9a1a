"""Local polytope enumeration, KL projection, and certificates."""

import json
import math

import numpy as np
import pytest

from nonlocality.polytope import (
    enumerate_vertices,
    kl_divergence,
    kl_to_local,
    local_membership,
    optimize_kl,
    separating_functional,
)
from nonlocality.prbox import pr_box_behavior

PR_DISTANCE_BITS = 2.0 - math.log2(3.0)  # exact projection distance of the nonlocal box


def test_vertex_enumeration_counts_deterministic_strategies():
    poly = enumerate_vertices((2, 2, 2, 2))
    assert poly.n_vertices == 16
    assert poly.vertex_matrix.shape == (16, 16)
    # every vertex is a deterministic table: entries in {0, 1}, one per pair
    v = poly.vertex_matrix
    assert np.all((v == 0.0) | (v == 1.0))
    assert np.allclose(v.reshape(16, 2, 2, 4).sum(axis=3), 1.0)


def test_vertex_guard_refuses_oversized_scenarios():
    with pytest.raises(ValueError):
        enumerate_vertices((2, 2, 40, 40))


def test_mix_requires_simplex_weights():
    poly = enumerate_vertices((2, 2, 2, 2))
    with pytest.raises(ValueError):
        poly.mix(np.full(16, 2.0 / 16.0))


def test_kl_divergence_basics():
    poly = enumerate_vertices((2, 2, 2, 2))
    uniform = poly.mix(np.full(16, 1.0 / 16.0))
    assert kl_divergence(uniform, uniform) == pytest.approx(0.0, abs=1e-15)
    assert kl_divergence(pr_box_behavior(), uniform) > 0.1
    manual = kl_divergence(pr_box_behavior(), uniform, setting_weights=np.full((2, 2), 0.25))
    assert abs(manual - kl_divergence(pr_box_behavior(), uniform)) < 1e-15


def test_projection_of_a_local_mixture_is_at_distance_zero():
    rng = np.random.default_rng(61)
    poly = enumerate_vertices((2, 2, 2, 2))
    for _ in range(5):
        w = rng.dirichlet(np.ones(16))
        result = kl_to_local(poly.mix(w), polytope=poly)
        assert result.converged
        assert result.distance_bits < 1e-8


def test_nonlocal_box_projection_distance():
    result = kl_to_local(pr_box_behavior())
    assert result.converged
    assert result.gap_bits <= 1e-9
    assert abs(result.distance_bits - PR_DISTANCE_BITS) < 1e-6
    assert json.dumps(result.to_json_dict())


def test_both_solvers_agree_on_the_nonlocal_box():
    cg = kl_to_local(pr_box_behavior(), solver="cg")
    mw = kl_to_local(pr_box_behavior(), solver="mw")
    assert abs(cg.distance_bits - mw.distance_bits) < 1e-7
    assert cg.solver.startswith("cg/")
    assert mw.solver.startswith("mw/")


def test_membership_lp_separates_local_from_nonlocal():
    poly = enumerate_vertices((2, 2, 2, 2))
    inside, slack_in = local_membership(poly.mix(np.full(16, 1.0 / 16.0)), polytope=poly)
    outside, slack_out = local_membership(pr_box_behavior(), polytope=poly)
    assert inside and slack_in < 1e-9
    assert not outside and slack_out > 1e-3


def test_separating_functional_certifies_the_nonlocal_box():
    p = pr_box_behavior()
    result = kl_to_local(p)
    cert = separating_functional(p, result)
    assert cert["local_maximum"] <= 1.0 + 1e-6
    assert cert["value_at_p"] > cert["local_maximum"] + 0.1
    assert cert["coefficients"].shape == p.shape


def test_qutrit_projection_regressions():
    # frozen optimizer outputs for the phase-family distance in bits
    max_ent = optimize_kl(gamma=1.0, seed=0)
    assert abs(max_ent.value - 0.05778302549332955) < 1e-5
    anomaly = optimize_kl(gamma=0.642, seed=0)
    assert abs(anomaly.value - 0.0767606234849058) < 1e-5
    # a partially entangled state beats the maximally entangled one clearly
    assert anomaly.value - max_ent.value > 0.015
    assert max_ent.gap is not None and max_ent.gap < 1e-8
