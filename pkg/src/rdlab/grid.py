"""Uniform cell-centered mesh on [0, 1] with discrete Neumann operators.

The Laplacian uses mirrored ghost cells, so it annihilates constants and its
flux form conserves the discrete integral exactly.  Cosine modes cos(k*pi*x)
sampled at cell centers are exact eigenvectors of the stencil with eigenvalue
-(2/h^2)(1 - cos(k*pi*h)), which converges to -(k*pi)^2 at rate O(h^2).
"""

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Mesh:
    """Cell-centered uniform mesh on the unit interval."""

    n_cells: int
    h: float = field(init=False)
    centers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_cells < 2:
            raise ValueError("mesh needs at least two cells")
        h = 1.0 / self.n_cells
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "centers", (np.arange(self.n_cells) + 0.5) * h)


def _as_field(f, mesh: Mesh) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (mesh.n_cells,):
        raise ValueError(
            f"field with shape {f.shape} does not match mesh of {mesh.n_cells} cells"
        )
    return f


def laplacian_neumann(f, mesh: Mesh) -> np.ndarray:
    """Second-order central Laplacian with mirrored ghost cells (zero flux)."""
    f = _as_field(f, mesh)
    inv_h2 = 1.0 / mesh.h**2
    out = np.empty_like(f)
    out[1:-1] = (f[:-2] - 2.0 * f[1:-1] + f[2:]) * inv_h2
    out[0] = (f[1] - f[0]) * inv_h2
    out[-1] = (f[-2] - f[-1]) * inv_h2
    return out


def face_differences(f, mesh: Mesh) -> np.ndarray:
    """One-sided differences (f[i+1]-f[i])/h on the n-1 interior faces."""
    f = _as_field(f, mesh)
    return np.diff(f) / mesh.h


def integrate(f, mesh: Mesh) -> float:
    """Midpoint (cell-average) quadrature; exact for cell-average data."""
    return float(np.sum(_as_field(f, mesh)) * mesh.h)


def l2_norm(f, mesh: Mesh) -> float:
    f = _as_field(f, mesh)
    return math.sqrt(float(np.dot(f, f)) * mesh.h)


def h1_seminorm(f, mesh: Mesh) -> float:
    d = face_differences(f, mesh)
    return math.sqrt(float(np.dot(d, d)) * mesh.h)


def h2_norm(f, mesh: Mesh) -> float:
    """Discrete H^2 norm.

    The second-order part reuses the mirrored-ghost Laplacian so that the
    norm is consistent with the operator that drives the dynamics.
    """
    lap = laplacian_neumann(f, mesh)
    return math.sqrt(
        l2_norm(f, mesh) ** 2 + h1_seminorm(f, mesh) ** 2 + l2_norm(lap, mesh) ** 2
    )


def stencil_eigenvalue(k: int, mesh: Mesh) -> float:
    """Eigenvalue of the mirrored-ghost stencil on the mode cos(k*pi*x)."""
    if not 0 <= k < mesh.n_cells:
        raise ValueError(f"mode index {k} outside 0..{mesh.n_cells - 1}")
    return -2.0 / mesh.h**2 * (1.0 - math.cos(k * math.pi * mesh.h))


@dataclass(frozen=True)
class PoincareConstants:
    """Poincare-Wirtinger constant and its reciprocal, spectral-gap form.

    c_pw bounds ||f - mean(f)||_2^2 <= c_pw * ||grad f||_2^2; p_gap = 1/c_pw
    is the form used when a gradient norm is bounded below by the deviation
    from the mean.  Both the discrete values (from the second-smallest
    stencil eigenvalue) and the continuum values (first nonzero Neumann
    eigenvalue pi^2 on the unit interval) are carried.
    """

    c_pw: float
    p_gap: float
    c_pw_continuum: float
    p_gap_continuum: float


def poincare_constants(mesh: Mesh) -> PoincareConstants:
    gap_discrete = -stencil_eigenvalue(1, mesh)
    gap_continuum = math.pi**2
    return PoincareConstants(
        c_pw=1.0 / gap_discrete,
        p_gap=gap_discrete,
        c_pw_continuum=1.0 / gap_continuum,
        p_gap_continuum=gap_continuum,
    )
