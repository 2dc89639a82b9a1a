"""Bloch and projective measurement containers."""

import math

import numpy as np
import pytest

from nonlocality.measurements import (
    BlochMeasurement,
    GeneralMeasurement,
    PhaseSetting,
    bloch_from_angles,
    bloch_x,
    bloch_z,
    cglmp_projectors,
)


def test_bloch_rejects_non_unit_direction():
    with pytest.raises(ValueError):
        BlochMeasurement((0.0, 0.0, 0.9))


def test_bloch_component_accessors():
    m = BlochMeasurement((0.6, 0.0, 0.8))
    assert (m.x, m.y, m.z) == (0.6, 0.0, 0.8)
    assert bloch_z().z == 1.0
    assert bloch_x().x == 1.0


def test_bloch_from_angles_is_unit_for_random_angles():
    rng = np.random.default_rng(5)
    for _ in range(50):
        polar = float(rng.uniform(0.0, math.pi))
        azimuth = float(rng.uniform(-math.pi, math.pi))
        m = bloch_from_angles(polar, azimuth)
        assert abs(m.x**2 + m.y**2 + m.z**2 - 1.0) < 1e-12
        assert abs(m.z - math.cos(polar)) < 1e-12


def test_bloch_to_measurement_projects_onto_spin_eigenstates():
    rng = np.random.default_rng(9)
    for _ in range(25):
        polar = float(rng.uniform(0.0, math.pi))
        azimuth = float(rng.uniform(-math.pi, math.pi))
        proj = bloch_from_angles(polar, azimuth).to_measurement()
        assert proj.n_outcomes == 2
        assert proj.dim == 2
        v = proj.vectors
        # outcome 0 must be the +1 eigenvector of n.sigma
        n = bloch_from_angles(polar, azimuth)
        sigma = np.array(
            [[n.z, n.x - 1j * n.y], [n.x + 1j * n.y, -n.z]], dtype=complex
        )
        assert np.allclose(sigma @ v[0], v[0], atol=1e-12)
        assert np.allclose(sigma @ v[1], -v[1], atol=1e-12)


def test_general_measurement_requires_orthonormal_vectors():
    bad = np.array([[1.0, 0.0], [1.0, 0.0]], dtype=complex)
    with pytest.raises(ValueError):
        GeneralMeasurement(bad)


def test_general_measurement_shape_accessors():
    m = GeneralMeasurement(np.eye(3, dtype=complex))
    assert m.n_outcomes == 3
    assert m.dim == 3


def test_phase_setting_rejects_unknown_party():
    with pytest.raises(ValueError):
        PhaseSetting("C", 0.0)


def test_cglmp_projectors_are_complete_orthonormal_triples():
    rng = np.random.default_rng(13)
    for party in ("A", "B"):
        for _ in range(20):
            phase = float(rng.uniform(-math.pi, math.pi))
            m = cglmp_projectors(PhaseSetting(party, phase))
            assert m.n_outcomes == 3 and m.dim == 3
            gram = m.vectors.conj() @ m.vectors.T
            assert np.allclose(gram, np.eye(3), atol=1e-12)
            # completeness: the three projectors resolve the identity
            total = sum(np.outer(v, v.conj()) for v in m.vectors)
            assert np.allclose(total, np.eye(3), atol=1e-12)


def test_cglmp_projectors_phase_shift_relabels_outcomes():
    # advancing the phase by one third of a turn permutes the outcome basis
    base = cglmp_projectors(PhaseSetting("A", 0.2)).vectors
    shifted = cglmp_projectors(PhaseSetting("A", 0.2 + 2.0 * math.pi / 3.0)).vectors
    overlaps = np.abs(shifted.conj() @ base.T)
    # each shifted vector matches exactly one base vector up to global phase
    assert np.allclose(np.sort(overlaps, axis=1)[:, -1], 1.0, atol=1e-12)
    assert np.allclose(np.sum(overlaps > 0.5, axis=1), 1)
