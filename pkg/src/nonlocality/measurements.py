"""Projective measurements: Bloch-vector qubit settings and phase-parametrized qutrit bases."""

from __future__ import annotations

from dataclasses import dataclass, field
import cmath
import math

import numpy as np

UNIT_TOL = 1e-12
ORTHO_TOL = 1e-10

# Primitive cube root of unity; the two parties use conjugate powers of it.
CHI = cmath.exp(2j * math.pi / 3)


@dataclass(frozen=True)
class GeneralMeasurement:
    """Complete rank-1 projective measurement; row k of `vectors` is outcome k."""

    vectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        vecs = np.asarray(self.vectors, dtype=complex)
        if vecs.ndim != 2 or vecs.shape[0] != vecs.shape[1]:
            raise ValueError(
                f"a complete rank-1 measurement on dimension d needs d vectors, got shape {vecs.shape}"
            )
        gram = vecs @ vecs.conj().T
        if not np.allclose(gram, np.eye(vecs.shape[0]), atol=ORTHO_TOL):
            raise ValueError("measurement vectors are not orthonormal")
        vecs.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)

    @property
    def n_outcomes(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class BlochMeasurement:
    """Qubit measurement along a unit Bloch vector; outcome +1 is index 0, -1 is index 1."""

    direction: tuple[float, float, float]

    def __post_init__(self):
        d = tuple(float(x) for x in self.direction)
        if len(d) != 3:
            raise ValueError("direction must be a 3-vector")
        norm = math.sqrt(d[0] ** 2 + d[1] ** 2 + d[2] ** 2)
        if abs(norm - 1.0) > UNIT_TOL:
            raise ValueError(f"direction must be a unit vector, |n| = {norm!r}")
        object.__setattr__(self, "direction", d)

    @property
    def x(self) -> float:
        return self.direction[0]

    @property
    def y(self) -> float:
        return self.direction[1]

    @property
    def z(self) -> float:
        return self.direction[2]

    def to_measurement(self) -> GeneralMeasurement:
        """Eigenbasis of n.sigma: row 0 the +1 eigenvector, row 1 the -1 eigenvector."""
        nx, ny, nz = self.direction
        half = 0.5 * math.acos(max(-1.0, min(1.0, nz)))
        phase = cmath.exp(1j * math.atan2(ny, nx))
        plus = np.array([math.cos(half), math.sin(half) * phase])
        minus = np.array([math.sin(half), -math.cos(half) * phase])
        return GeneralMeasurement(np.vstack([plus, minus]))


def bloch_from_angles(polar: float, azimuth: float) -> BlochMeasurement:
    return BlochMeasurement(
        (
            math.sin(polar) * math.cos(azimuth),
            math.sin(polar) * math.sin(azimuth),
            math.cos(polar),
        )
    )


def bloch_z() -> BlochMeasurement:
    return BlochMeasurement((0.0, 0.0, 1.0))


def bloch_x() -> BlochMeasurement:
    return BlochMeasurement((1.0, 0.0, 0.0))


@dataclass(frozen=True)
class PhaseSetting:
    """One party's phase-parametrized qutrit setting."""

    party: str
    phase: float

    def __post_init__(self):
        if self.party not in ("A", "B"):
            raise ValueError(f"party must be 'A' or 'B', got {self.party!r}")


def cglmp_projectors(setting: PhaseSetting) -> GeneralMeasurement:
    """Three-outcome qutrit basis for a phase setting.

    Outcome vectors for party A with phase alpha:
        |a> = (1/sqrt(3)) sum_n chi^(a n) e^(i n alpha) |n>,  chi = e^(2 pi i / 3);
    party B uses the conjugate root (chi -> chi-bar), i.e. the roles of the
    two nontrivial powers are swapped between the parties.
    """
    root = CHI if setting.party == "A" else CHI.conjugate()
    vecs = np.empty((3, 3), dtype=complex)
    for outcome in range(3):
        for n in range(3):
            vecs[outcome, n] = root ** (outcome * n) * cmath.exp(1j * n * setting.phase)
    return GeneralMeasurement(vecs / math.sqrt(3.0))
