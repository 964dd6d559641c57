"""Reaction networks, conservation laws, and equilibrium classification.

Two three-species networks are supported, with rate constants normalized to
one.  In the catalytic network (P1) species b mediates the exchange between
a and c, so both a+c and b+c are conserved pointwise by the reaction.  In
the symmetric cyclic network (P2) only the total a+b+c is conserved.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .grid import Mesh, integrate


class ReactionSystem(Enum):
    P1 = "p1"  # catalytic: b mediates the a <-> c exchange
    P2 = "p2"  # symmetric cyclic network


class Regime(Enum):
    POSITIVE_ONLY = "positive_only"
    COEXISTENCE = "coexistence"
    BOUNDARY_ONLY = "boundary_only"
    SYMMETRIC = "symmetric"


class RegimeMismatch(ValueError):
    """A quantity was requested outside the regime where it is defined."""


@dataclass(frozen=True)
class Masses:
    """Values of the conserved linear combinations.

    P1 conserves the integrals of a+c (m1) and b+c (m2); P2 conserves the
    integral of a+b+c (total).
    """

    system: ReactionSystem
    values: tuple

    def __post_init__(self):
        expected = 2 if self.system is ReactionSystem.P1 else 1
        if len(self.values) != expected:
            raise ValueError(
                f"{self.system.value} carries {expected} conserved masses, "
                f"got {len(self.values)}"
            )
        if any(not np.isfinite(v) or v < 0 for v in self.values):
            raise ValueError(f"masses must be finite and non-negative: {self.values}")

    @classmethod
    def p1(cls, m1: float, m2: float) -> "Masses":
        return cls(ReactionSystem.P1, (float(m1), float(m2)))

    @classmethod
    def p2(cls, total: float) -> "Masses":
        return cls(ReactionSystem.P2, (float(total),))

    @property
    def m1(self) -> float:
        if self.system is not ReactionSystem.P1:
            raise AttributeError("m1 is a P1 mass")
        return self.values[0]

    @property
    def m2(self) -> float:
        if self.system is not ReactionSystem.P1:
            raise AttributeError("m2 is a P1 mass")
        return self.values[1]

    @property
    def total(self) -> float:
        if self.system is not ReactionSystem.P2:
            raise AttributeError("total is a P2 mass")
        return self.values[0]


@dataclass(frozen=True)
class Params:
    """Positive diffusion coefficients, optionally bundled with masses."""

    d1: float
    d2: float
    d3: float
    masses: Masses | None = None

    def __post_init__(self):
        if min(self.d1, self.d2, self.d3) <= 0:
            raise ValueError("diffusion coefficients must be positive")

    @property
    def diffusion(self) -> tuple:
        return (self.d1, self.d2, self.d3)


@dataclass(frozen=True)
class EquilibriumSet:
    """Spatially homogeneous steady states admissible for given masses."""

    positive: tuple | None
    boundary: list
    regime: Regime


def reaction_rhs(system: ReactionSystem, a, b, c):
    """Reaction terms (f_a, f_b, f_c); accepts scalars or arrays.

    P1: f_a = f_b = b(c-a), f_c = -b(c-a).
    P2: f_a = -ab-ac+2bc and its two cyclic images.
    """
    if system is ReactionSystem.P1:
        r = b * (c - a)
        return r, r, -r
    fa = -a * b - a * c + 2.0 * b * c
    fb = -b * a - b * c + 2.0 * a * c
    fc = -c * a - c * b + 2.0 * a * b
    return fa, fb, fc


def reaction_jacobian(system: ReactionSystem, a: float, b: float, c: float) -> np.ndarray:
    """3x3 Jacobian of the reaction terms at a homogeneous state."""
    if system is ReactionSystem.P1:
        return np.array(
            [
                [-b, c - a, b],
                [-b, c - a, b],
                [b, a - c, -b],
            ]
        )
    return np.array(
        [
            [-b - c, -a + 2.0 * c, -a + 2.0 * b],
            [-b + 2.0 * c, -a - c, -b + 2.0 * a],
            [-c + 2.0 * b, -c + 2.0 * a, -a - b],
        ]
    )


def reaction_jacobian_apply(system: ReactionSystem, state_fields, v_fields):
    """Apply the reaction Jacobian at (a, b, c) to a direction (v1, v2, v3).

    The Jacobian entries are linear in the state, so this also evaluates the
    difference J(base + u) - J(base) applied to v when called with u as the
    state.  Works pointwise on fields.
    """
    a, b, c = state_fields
    v1, v2, v3 = v_fields
    if system is ReactionSystem.P1:
        w = b * (v3 - v1) + (c - a) * v2
        return w, w, -w
    r1 = (-b - c) * v1 + (-a + 2.0 * c) * v2 + (-a + 2.0 * b) * v3
    r2 = (-b + 2.0 * c) * v1 + (-a - c) * v2 + (-b + 2.0 * a) * v3
    r3 = (-c + 2.0 * b) * v1 + (-c + 2.0 * a) * v2 + (-a - b) * v3
    return r1, r2, r3


def classify_equilibria(system: ReactionSystem, masses: Masses) -> EquilibriumSet:
    """Equilibria admissible for the given masses.

    P1 admits a positive equilibrium (m1/2, m2-m1/2, m1/2) iff m1 < 2*m2 and
    a boundary equilibrium (m1-m2, 0, m2) iff m1 >= m2; at m1 = 2*m2 the
    positive formula degenerates onto the boundary point and only the
    boundary equilibrium is reported.  P2 has the positive equilibrium
    (M/3, M/3, M/3) and the three single-species boundary states.
    """
    if masses.system is not system:
        raise ValueError("masses were built for a different system")
    if system is ReactionSystem.P1:
        m1, m2 = masses.m1, masses.m2
        boundary = [(m1 - m2, 0.0, m2)] if m1 >= m2 else []
        if m1 < m2:
            return EquilibriumSet(
                positive=(m1 / 2.0, m2 - m1 / 2.0, m1 / 2.0),
                boundary=boundary,
                regime=Regime.POSITIVE_ONLY,
            )
        if m1 < 2.0 * m2:
            return EquilibriumSet(
                positive=(m1 / 2.0, m2 - m1 / 2.0, m1 / 2.0),
                boundary=boundary,
                regime=Regime.COEXISTENCE,
            )
        return EquilibriumSet(positive=None, boundary=boundary, regime=Regime.BOUNDARY_ONLY)

    m = masses.total
    if m == 0.0:
        return EquilibriumSet(positive=None, boundary=[(0.0, 0.0, 0.0)], regime=Regime.SYMMETRIC)
    return EquilibriumSet(
        positive=(m / 3.0, m / 3.0, m / 3.0),
        boundary=[(m, 0.0, 0.0), (0.0, m, 0.0), (0.0, 0.0, m)],
        regime=Regime.SYMMETRIC,
    )


def compute_masses(state, mesh: Mesh) -> Masses:
    """Quadrature values of the conserved combinations of a state."""
    if state.system is ReactionSystem.P1:
        return Masses.p1(
            integrate(state.a + state.c, mesh), integrate(state.b + state.c, mesh)
        )
    return Masses.p2(integrate(state.a + state.b + state.c, mesh))
