"""Closed-form spectra of the linearized operators around boundary equilibria.

In 1-D every Neumann mode diagonalizes all three diffusion blocks at once,
so the linearization splits into 3x3 per-mode matrices whose eigenvalues are
available in closed form.  A dense eigensolve of the assembled discrete
operator is retained purely as an independent cross-check.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from .grid import Mesh, stencil_eigenvalue
from .model import (
    Masses,
    Params,
    ReactionSystem,
    RegimeMismatch,
    classify_equilibria,
    reaction_jacobian,
)


class MeshTooLarge(ValueError):
    """Dense eigensolve is limited to n_cells <= 256."""


@dataclass(frozen=True)
class ModeSpectrum:
    mode_index: int
    laplacian_eigenvalue: float
    operator_eigenvalues: tuple


def neumann_eigenvalues(count: int, mesh: Mesh | None = None) -> np.ndarray:
    """First ``count`` Neumann Laplacian eigenvalues, continuum or discrete.

    Continuum: -(k*pi)^2 on the unit interval.  Discrete: the mirrored-ghost
    stencil values -(2/h^2)(1 - cos(k*pi*h)), defined for k < n_cells.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if mesh is None:
        k = np.arange(count)
        return -((k * math.pi) ** 2)
    if count > mesh.n_cells:
        raise ValueError(f"the {mesh.n_cells}-cell stencil has {mesh.n_cells} modes")
    return np.array([stencil_eigenvalue(k, mesh) for k in range(count)])


def linearized_modes_p1(lambda_k: float, params: Params, a_bar: float, c_bar: float) -> np.ndarray:
    """Per-mode eigenvalues around the catalytic boundary equilibrium.

    The per-mode matrix is triangular in the catalyst component, giving
    {d1*lam, d3*lam, d2*lam + (c_bar - a_bar)}.
    """
    if lambda_k > 0:
        raise ValueError("Laplacian eigenvalues are non-positive")
    return np.array(
        [
            params.d1 * lambda_k,
            params.d3 * lambda_k,
            params.d2 * lambda_k + (c_bar - a_bar),
        ]
    )


def linearized_modes_p2(lambda_k: float, params: Params, a_bar: float) -> np.ndarray:
    """Per-mode eigenvalues around the symmetric boundary equilibrium (a_bar, 0, 0).

    One branch is d1*lam; the other two solve
    eta^2 - ((d2+d3)*lam - 2*a_bar)*eta + d2*d3*lam^2 - (d2+d3)*lam*a_bar - 3*a_bar^2 = 0
    whose discriminant (d2-d3)^2*lam^2 + 16*a_bar^2 is always positive.
    """
    if lambda_k > 0:
        raise ValueError("Laplacian eigenvalues are non-positive")
    if a_bar <= 0:
        raise ValueError("a_bar must be positive")
    d2, d3 = params.d2, params.d3
    s = (d2 + d3) * lambda_k - 2.0 * a_bar
    p = d2 * d3 * lambda_k**2 - (d2 + d3) * lambda_k * a_bar - 3.0 * a_bar**2
    disc = (d2 - d3) ** 2 * lambda_k**2 + 16.0 * a_bar**2
    sq = math.sqrt(disc)
    # stable quadratic: take the root away from cancellation first
    q = 0.5 * (s + sq) if s >= 0 else 0.5 * (s - sq)
    r1, r2 = q, p / q
    return np.array([params.d1 * lambda_k, min(r1, r2), max(r1, r2)])


def growth_quadratic_root(lambda_k: float, params: Params, a_bar: float) -> float:
    """Larger quadratic root g(lam); non-decreasing on lam <= 0 with g(0) = a_bar."""
    return float(linearized_modes_p2(lambda_k, params, a_bar)[2])


def _p2_canonical(params: Params, boundary_eq: tuple) -> tuple:
    """Permute species so the occupied one comes first; the network is
    invariant under species relabeling."""
    nz = int(np.argmax(boundary_eq))
    rest = [i for i in range(3) if i != nz]
    order = (nz, rest[0], rest[1])
    d = params.diffusion
    return Params(d[order[0]], d[order[1]], d[order[2]]), boundary_eq[nz], order


def _validate_boundary(system: ReactionSystem, masses: Masses, boundary_eq: tuple) -> None:
    eqs = classify_equilibria(system, masses)
    for eq in eqs.boundary:
        if np.allclose(eq, boundary_eq, rtol=1e-10, atol=1e-12):
            return
    raise RegimeMismatch(
        f"{tuple(boundary_eq)} is not a boundary equilibrium for masses {masses.values}"
    )


def max_growth_rate(
    system: ReactionSystem,
    params: Params,
    masses: Masses,
    boundary_eq: tuple,
    n_modes: int = 64,
    mesh: Mesh | None = None,
) -> tuple:
    """Maximal linearized growth rate over modes, with the attaining mode.

    At mode zero only mass-conserving perturbations are admissible, which
    removes the neutral pure-diffusion branches; the remaining eigenvalue is
    c_bar - a_bar for the catalytic system and {a_bar, -3*a_bar} for the
    symmetric one.  Higher modes conserve mass automatically and contribute
    their full branch sets, all below the mode-zero value.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be at least 1")
    _validate_boundary(system, masses, boundary_eq)
    lams = neumann_eigenvalues(n_modes, mesh)
    best, best_mode = -math.inf, 0
    for k, lam in enumerate(lams):
        if k == 0:
            if system is ReactionSystem.P1:
                candidates = [boundary_eq[2] - boundary_eq[0]]
            else:
                a_bar = max(boundary_eq)
                candidates = [a_bar, -3.0 * a_bar]
        elif system is ReactionSystem.P1:
            candidates = linearized_modes_p1(lam, params, boundary_eq[0], boundary_eq[2])
        else:
            params_c, a_bar, _ = _p2_canonical(params, boundary_eq)
            candidates = linearized_modes_p2(lam, params_c, a_bar)
        top = float(np.max(candidates))
        if top > best:
            best, best_mode = top, k
    return best, best_mode


def mode_spectra(
    system: ReactionSystem,
    params: Params,
    boundary_eq: tuple,
    n_modes: int,
    mesh: Mesh | None = None,
) -> list:
    """Per-mode spectra rows for reporting."""
    lams = neumann_eigenvalues(n_modes, mesh)
    rows = []
    for k, lam in enumerate(lams):
        if system is ReactionSystem.P1:
            eigs = linearized_modes_p1(lam, params, boundary_eq[0], boundary_eq[2])
        else:
            params_c, a_bar, _ = _p2_canonical(params, boundary_eq)
            eigs = linearized_modes_p2(lam, params_c, a_bar)
        rows.append(ModeSpectrum(k, float(lam), tuple(float(e) for e in eigs)))
    return rows


def laplacian_matrix(mesh: Mesh) -> np.ndarray:
    """Dense matrix of the mirrored-ghost Laplacian."""
    n = mesh.n_cells
    inv_h2 = 1.0 / mesh.h**2
    m = np.zeros((n, n))
    idx = np.arange(n)
    m[idx, idx] = -2.0
    m[idx[:-1], idx[:-1] + 1] = 1.0
    m[idx[1:], idx[1:] - 1] = 1.0
    m[0, 0] = -1.0
    m[-1, -1] = -1.0
    return m * inv_h2


def assemble_operator(mesh: Mesh, system: ReactionSystem, params: Params, eq: tuple) -> np.ndarray:
    """Dense 3n x 3n linearization: diffusion blocks plus the reaction Jacobian."""
    lap = laplacian_matrix(mesh)
    blocks = block_diag(params.d1 * lap, params.d2 * lap, params.d3 * lap)
    jac = reaction_jacobian(system, *eq)
    return blocks + np.kron(jac, np.eye(mesh.n_cells))


def discrete_operator_spectrum(
    mesh: Mesh, system: ReactionSystem, params: Params, boundary_eq: tuple
) -> np.ndarray:
    """Real parts of the assembled operator's eigenvalues, sorted descending."""
    if mesh.n_cells > 256:
        raise MeshTooLarge(f"{mesh.n_cells} cells exceeds the dense eigensolve limit")
    eigs = np.linalg.eigvals(assemble_operator(mesh, system, params, boundary_eq))
    return np.sort(eigs.real)[::-1]
