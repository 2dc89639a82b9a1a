"""Joint outcome statistics P(a,b|x,y) and two-qubit correlators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .measurements import BlochMeasurement, GeneralMeasurement
from .states import BipartitePureState

NEGATIVITY_TOL = 1e-12
NORMALIZATION_TOL = 1e-10
THETA_STATE_TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class BehaviorTable:
    """Conditional distribution table, indexed probs[x, y, a, b]."""

    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 4:
            raise ValueError(f"probs must have shape (nx, ny, na, nb), got {p.shape}")
        if p.min() < -NEGATIVITY_TOL:
            raise ValueError(f"negative probability {p.min()!r}")
        p = np.clip(p, 0.0, None)
        sums = p.sum(axis=(2, 3))
        if np.max(np.abs(sums - 1.0)) > NORMALIZATION_TOL:
            raise ValueError(
                f"each setting pair must sum to 1, max deviation {np.max(np.abs(sums - 1.0))!r}"
            )
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        """(n_settings_a, n_settings_b, n_outcomes_a, n_outcomes_b)."""
        return self.probs.shape

    def marginal_a(self) -> np.ndarray:
        """P(a|x,y) as an array [x, y, a]."""
        return self.probs.sum(axis=3)

    def marginal_b(self) -> np.ndarray:
        """P(b|x,y) as an array [x, y, b]."""
        return self.probs.sum(axis=2)

    def nonsignaling_deviation(self) -> float:
        """Largest change of either party's marginal under the other's setting."""
        pa = self.marginal_a()
        pb = self.marginal_b()
        dev_a = np.max(pa.max(axis=1) - pa.min(axis=1))
        dev_b = np.max(pb.max(axis=0) - pb.min(axis=0))
        return float(max(dev_a, dev_b))

    def to_json_dict(self) -> dict:
        nx, ny, na, nb = self.shape
        return {
            "n_settings_a": nx,
            "n_settings_b": ny,
            "n_outcomes_a": na,
            "n_outcomes_b": nb,
            "probs": self.probs.tolist(),
        }


def behavior(
    state: BipartitePureState,
    measurements_a: Sequence[GeneralMeasurement],
    measurements_b: Sequence[GeneralMeasurement],
) -> BehaviorTable:
    """Born-rule table P(a,b|x,y) = |<a_x| <b_y| psi>|^2."""
    for m in measurements_a:
        if m.dim != state.dim_a:
            raise ValueError(f"party-A measurement dimension {m.dim} != state dimension {state.dim_a}")
    for m in measurements_b:
        if m.dim != state.dim_b:
            raise ValueError(f"party-B measurement dimension {m.dim} != state dimension {state.dim_b}")
    va = np.stack([m.vectors for m in measurements_a])
    vb = np.stack([m.vectors for m in measurements_b])
    amps = np.einsum("xaj,jk,ybk->xyab", va.conj(), state.amplitudes, vb.conj())
    return BehaviorTable(np.abs(amps) ** 2)


def pauli_expectation(
    state: BipartitePureState, a: BlochMeasurement, b: BlochMeasurement
) -> float:
    """<psi| (a.sigma) x (b.sigma) |psi> for an arbitrary two-qubit state."""
    if state.dim_a != 2 or state.dim_b != 2:
        raise ValueError("pauli_expectation needs a two-qubit state")
    op_a = a.x * PAULI_X + a.y * PAULI_Y + a.z * PAULI_Z
    op_b = b.x * PAULI_X + b.y * PAULI_Y + b.z * PAULI_Z
    c = state.amplitudes
    return float(np.vdot(c, op_a @ c @ op_b.T).real)


def _theta_state_sin2theta(state: BipartitePureState) -> float:
    """sin(2 theta) of a Schmidt-diagonal two-qubit state; rejects anything else."""
    if state.dim_a != 2 or state.dim_b != 2:
        raise ValueError("expected a two-qubit state")
    c = state.amplitudes
    off = max(abs(c[0, 1]), abs(c[1, 0]))
    if off > THETA_STATE_TOL:
        raise ValueError("state is not Schmidt-diagonal in the computational basis")
    if max(abs(c[0, 0].imag), abs(c[1, 1].imag)) > THETA_STATE_TOL:
        raise ValueError("Schmidt amplitudes must be real")
    c00, c11 = c[0, 0].real, c[1, 1].real
    if c00 < -THETA_STATE_TOL or c11 < -THETA_STATE_TOL:
        raise ValueError("Schmidt amplitudes must be nonnegative")
    return 2.0 * c00 * c11


def correlator(
    state: BipartitePureState, a: BlochMeasurement, b: BlochMeasurement
) -> float:
    """E(a,b) = a_z b_z + sin(2 theta) (a_x b_x - a_y b_y) for cos|00>+sin|11> states."""
    s = _theta_state_sin2theta(state)
    return a.z * b.z + s * (a.x * b.x - a.y * b.y)
