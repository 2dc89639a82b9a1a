"""Bipartite pure states and their entanglement entropy."""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

NORM_TOL = 1e-12

# Eigenvalues of a reduced density matrix may come out of the solver a hair
# below zero; anything beyond this is a real error, not roundoff.
EIGENVALUE_FLOOR = -1e-12


@dataclass(frozen=True)
class BipartitePureState:
    """Pure state of a dim_a x dim_b system, amplitudes indexed [i, j] = <ij|psi>."""

    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 2:
            raise ValueError(f"amplitudes must be a 2-D array, got shape {amps.shape}")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: sum |c|^2 = {norm_sq!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim_a(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dim_b(self) -> int:
        return self.amplitudes.shape[1]

    def reduced_a(self) -> np.ndarray:
        """Density matrix of party A after tracing out B."""
        c = self.amplitudes
        return c @ c.conj().T

    def to_json_dict(self) -> dict:
        """JSON-safe representation; complex amplitudes as [re, im] pairs."""
        return {
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "amplitudes": [
                [[z.real, z.imag] for z in row] for row in self.amplitudes
            ],
        }


def make_theta_state(theta: float) -> BipartitePureState:
    """cos(theta)|00> + sin(theta)|11>, theta in [0, pi/4]."""
    if not 0.0 <= theta <= math.pi / 4 + NORM_TOL:
        raise ValueError(f"theta must lie in [0, pi/4], got {theta}")
    amps = np.zeros((2, 2), dtype=complex)
    amps[0, 0] = math.cos(theta)
    amps[1, 1] = math.sin(theta)
    return BipartitePureState(amps)


def make_gamma_state(gamma: float) -> BipartitePureState:
    """(|00> + gamma|11> + |22>) / sqrt(2 + gamma^2), gamma >= 0."""
    if gamma < 0:
        raise ValueError(f"gamma must be nonnegative, got {gamma}")
    amps = np.zeros((3, 3), dtype=complex)
    norm = math.sqrt(2.0 + gamma * gamma)
    amps[0, 0] = 1.0 / norm
    amps[1, 1] = gamma / norm
    amps[2, 2] = 1.0 / norm
    return BipartitePureState(amps)


def make_max_entangled(d: int) -> BipartitePureState:
    """sum_i |ii> / sqrt(d)."""
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    return BipartitePureState(np.eye(d, dtype=complex) / math.sqrt(d))


def make_hardy_state() -> BipartitePureState:
    """(|01> + |10> + |11>) / sqrt(3)."""
    amps = np.array([[0.0, 1.0], [1.0, 1.0]], dtype=complex) / math.sqrt(3.0)
    return BipartitePureState(amps)


def schmidt_coefficients(state: BipartitePureState) -> np.ndarray:
    """Schmidt spectrum (descending); squares are the reduced eigenvalues."""
    return np.linalg.svd(state.amplitudes, compute_uv=False)


def entanglement_entropy(state: BipartitePureState) -> float:
    """Von Neumann entropy of the reduced state, in bits."""
    lams = np.linalg.eigvalsh(state.reduced_a())
    if lams.min() < EIGENVALUE_FLOOR:
        raise ValueError(f"reduced state has negative eigenvalue {lams.min()!r}")
    lams = np.clip(lams, 0.0, None)
    nz = lams[lams > 0]
    return float(-np.sum(nz * np.log2(nz))) + 0.0
