"""Hardy-type nonlocality: an all-or-nothing argument without inequalities.

Conventions: z-basis outcome +1 is |0>, x-basis outcome +1 is (|0>+|1>)/sqrt(2).
The fixed certificate measures sigma_z / sigma_x; the scan generalizes both
parties' bases to arbitrary rotations in the x-z plane.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
import math

import numpy as np

from .optimize import OptimizationResult, multistart_minimize, wrap_angle
from .states import BipartitePureState, make_theta_state

ZERO_TOL = 1e-9
PENALTY_WEIGHT = 1e6
POSITIVE_TOL = 1e-6

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HardyCertificate:
    """The four probabilities of the argument and the verdict at tolerance tau."""

    p_xx_mm: float
    p_xz_mm: float
    p_zx_mm: float
    p_zz_pp: float
    tau: float
    holds: bool

    def zeros(self) -> tuple[float, float, float]:
        return (self.p_xz_mm, self.p_zx_mm, self.p_zz_pp)

    def to_json_dict(self) -> dict:
        return {
            "p_xx_mm": self.p_xx_mm,
            "p_xz_mm": self.p_xz_mm,
            "p_zx_mm": self.p_zx_mm,
            "p_zz_pp": self.p_zz_pp,
            "tau": self.tau,
            "holds": self.holds,
        }


def hardy_certificate(state: BipartitePureState, tau: float = ZERO_TOL) -> HardyCertificate:
    """Evaluate the four probabilities with sigma_z / sigma_x on both sides.

    holds is true when the xx (-1,-1) event has weight above tau while the
    three constraint events all stay below it.
    """
    if state.dim_a != 2 or state.dim_b != 2:
        raise ValueError("the argument is formulated for two qubits")
    c = state.amplitudes
    amp_xx = (c[0, 0] - c[0, 1] - c[1, 0] + c[1, 1]) / 2.0
    amp_xz = (c[0, 1] - c[1, 1]) / _SQRT2
    amp_zx = (c[1, 0] - c[1, 1]) / _SQRT2
    amp_zz = c[0, 0]
    p_xx = abs(amp_xx) ** 2
    p_xz = abs(amp_xz) ** 2
    p_zx = abs(amp_zx) ** 2
    p_zz = abs(amp_zz) ** 2
    holds = p_xx > tau and max(p_xz, p_zx, p_zz) < tau
    return HardyCertificate(
        p_xx_mm=float(p_xx),
        p_xz_mm=float(p_xz),
        p_zx_mm=float(p_zx),
        p_zz_pp=float(p_zz),
        tau=tau,
        holds=bool(holds),
    )


@dataclass(frozen=True)
class LhvAnalysis:
    """Exhaustive check of deterministic assignments against the zero constraints."""

    constraints: tuple[str, ...]
    survivors: tuple[tuple[int, int, int, int], ...]
    xx_mm_survivors: tuple[tuple[int, int, int, int], ...]
    forces_zero: bool


def lhv_contradiction(constraints: tuple[str, ...] = ("xz", "zx", "zz")) -> LhvAnalysis:
    """Enumerate all 16 assignments (a_x, a_z, b_x, b_z) in {-1, +1}^4.

    Constraint names veto assignments producing the corresponding event:
    'xz' and 'zx' the mixed (-1,-1) outcomes, 'zz' the (+1,+1) outcome.
    forces_zero reports whether no survivor yields xx = (-1,-1): under all
    three constraints a local model assigns the Hardy event probability zero.
    """
    unknown = set(constraints) - {"xz", "zx", "zz"}
    if unknown:
        raise ValueError(f"unknown constraints: {sorted(unknown)}")
    survivors = []
    for a_x, a_z, b_x, b_z in product((-1, 1), repeat=4):
        if "xz" in constraints and a_x == -1 and b_z == -1:
            continue
        if "zx" in constraints and a_z == -1 and b_x == -1:
            continue
        if "zz" in constraints and a_z == 1 and b_z == 1:
            continue
        survivors.append((a_x, a_z, b_x, b_z))
    xx_mm = [s for s in survivors if s[0] == -1 and s[2] == -1]
    return LhvAnalysis(
        constraints=tuple(constraints),
        survivors=tuple(survivors),
        xx_mm_survivors=tuple(xx_mm),
        forces_zero=not xx_mm,
    )


def _hardy_probabilities(theta: float, angles) -> tuple[float, float, float, float]:
    """(target, and the three constraint probabilities) for planar bases.

    angles = (u_a1, u_a2, u_b1, u_b2): each party's first/second measurement
    direction in the x-z plane; the first settings play the z role, the second
    the x role of the fixed certificate.
    """
    u_a1, u_a2, u_b1, u_b2 = angles
    ct, st = math.cos(theta), math.sin(theta)

    def amp_mm(ua: float, ub: float) -> float:
        return ct * math.sin(ua / 2.0) * math.sin(ub / 2.0) + st * math.cos(ua / 2.0) * math.cos(ub / 2.0)

    def amp_pp(ua: float, ub: float) -> float:
        return ct * math.cos(ua / 2.0) * math.cos(ub / 2.0) + st * math.sin(ua / 2.0) * math.sin(ub / 2.0)

    target = amp_mm(u_a2, u_b2) ** 2
    zero_xz = amp_mm(u_a2, u_b1) ** 2
    zero_zx = amp_mm(u_a1, u_b2) ** 2
    zero_zz = amp_pp(u_a1, u_b1) ** 2
    return target, zero_xz, zero_zx, zero_zz


@dataclass(frozen=True)
class HardyScanRow:
    theta: float
    probability: float
    zero_residual: float
    holds: bool


def optimize_hardy_probability(theta: float, seed: int | None = None) -> OptimizationResult:
    """Maximize the Hardy event probability over planar bases at this theta.

    The three zero constraints enter as an exact linear penalty: each
    constraint probability is quadratic across its zero manifold, so the
    penalized optimum lands on the manifold to solver precision.
    """

    def neg(v: np.ndarray) -> float:
        target, z1, z2, z3 = _hardy_probabilities(theta, v)
        return -(target - PENALTY_WEIGHT * (z1 + z2 + z3))

    starts = [
        np.array([0.0, math.pi / 2.0, 0.0, math.pi / 2.0]),
        np.array([math.pi, math.pi / 2.0, math.pi, math.pi / 2.0]),
        np.array([0.5, 2.0, 0.5, 2.0]),
        np.array([2.6, 1.0, 2.6, 1.0]),
    ]
    rng = np.random.default_rng(0 if seed is None else seed)
    for _ in range(4):
        starts.append(rng.uniform(0.0, 2.0 * math.pi, size=4))
    x, f, n_iter, n_eval, converged = multistart_minimize(neg, starts)
    target, z1, z2, z3 = _hardy_probabilities(theta, x)
    return OptimizationResult(
        value=float(target),
        params={
            "a1_polar": wrap_angle(x[0]),
            "a2_polar": wrap_angle(x[1]),
            "b1_polar": wrap_angle(x[2]),
            "b2_polar": wrap_angle(x[3]),
        },
        iterations=n_iter,
        n_evaluations=n_eval,
        converged=converged,
        seed=seed,
        extras={"theta": theta, "zero_residual": float(max(z1, z2, z3))},
    )


def hardy_scan(thetas, seed: int | None = None, tau: float = ZERO_TOL) -> list[HardyScanRow]:
    """Optimized Hardy probability across theta values.

    holds requires a probability above the positivity tolerance with all
    constraints still at zero within tau.
    """
    rows = []
    for theta in thetas:
        res = optimize_hardy_probability(float(theta), seed=seed)
        residual = res.extras["zero_residual"]
        rows.append(
            HardyScanRow(
                theta=float(theta),
                probability=res.value,
                zero_residual=residual,
                holds=bool(res.value > POSITIVE_TOL and residual < tau),
            )
        )
    return rows
