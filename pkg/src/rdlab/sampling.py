"""Seeded construction of initial data with prescribed conserved masses."""

import numpy as np

from .grid import Mesh, integrate
from .model import Masses, ReactionSystem
from .solver import State


def random_smooth_field(rng: np.random.Generator, mesh: Mesh, n_modes: int = 4) -> np.ndarray:
    """Zero-mean random combination of the first few cosine modes, |.| <= ~2."""
    x = mesh.centers
    out = np.zeros(mesh.n_cells)
    for k in range(1, n_modes + 1):
        out += rng.uniform(-1.0, 1.0) / k * np.cos(k * np.pi * x)
    return out


def positive_initial_data(
    system: ReactionSystem,
    masses: Masses,
    rng: np.random.Generator,
    mesh: Mesh,
    amplitude: float = 0.3,
    n_modes: int = 4,
) -> State:
    """Strictly positive random fields whose quadrature masses match exactly.

    Each species is a modulated positive profile rescaled so the conserved
    combinations hit the requested values; amplitude < 0.45 keeps the
    profiles bounded away from zero.
    """
    if not 0 <= amplitude < 0.45:
        raise ValueError("amplitude must lie in [0, 0.45)")
    profiles = [
        1.0 + amplitude * random_smooth_field(rng, mesh, n_modes) for _ in range(3)
    ]
    ints = [integrate(p, mesh) for p in profiles]
    if system is ReactionSystem.P1:
        m1, m2 = masses.m1, masses.m2
        mc = 0.5 * min(m1, m2)
        gamma = mc / ints[2]
        alpha = (m1 - mc) / ints[0]
        beta = (m2 - mc) / ints[1]
    else:
        m = masses.total
        shares = (0.4 * m, 0.35 * m, 0.25 * m)
        alpha, beta, gamma = (s / i for s, i in zip(shares, ints))
    return State(
        system, alpha * profiles[0], beta * profiles[1], gamma * profiles[2], 0.0
    )


def mass_neutral_perturbation(
    system: ReactionSystem,
    rng: np.random.Generator,
    mesh: Mesh,
    size: float,
    n_modes: int = 3,
    reactive_component: float = 0.0,
) -> tuple:
    """Perturbation fields whose species averages leave all masses unchanged.

    Spatial cosine modes have zero mean, so any combination is admissible;
    for the catalytic system the homogeneous direction (1, 1, -1) is also
    mass-neutral and can be mixed in via ``reactive_component`` to excite
    the slow reactive mode.
    """
    fields = [size * random_smooth_field(rng, mesh, n_modes) for _ in range(3)]
    if reactive_component:
        signs = (1.0, 1.0, -1.0)
        if system is ReactionSystem.P2:
            # for the symmetric system only the total matters; (1, 1, -2) works
            signs = (1.0, 1.0, -2.0)
        for f, s in zip(fields, signs):
            f += size * reactive_component * s
    return tuple(fields)
