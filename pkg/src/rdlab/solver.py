"""Operator-split time integration with positivity guarding.

One step is a Lie split: an explicit Euler reaction update followed by an
implicit diffusion solve (backward Euler or Crank-Nicolson), one tridiagonal
system per species.  The reaction update conserves the linear invariants
pointwise and the flux-form Laplacian conserves each integral, so the
conserved masses drift only at roundoff level.  If the reaction update would
push a cell below -positivity_tol the step is rejected and retried with half
the step size, down to dt_min; values inside [-positivity_tol, 0) are clamped
to zero.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from . import entropy as _entropy
from .grid import Mesh, l2_norm, laplacian_neumann
from .model import (
    EquilibriumSet,
    Masses,
    Params,
    ReactionSystem,
    classify_equilibria,
    compute_masses,
    reaction_rhs,
)


class PositivityFailure(RuntimeError):
    """Negativity persisted below -positivity_tol at the smallest step size."""

    def __init__(self, t: float, dt: float, worst: float):
        super().__init__(
            f"concentration {worst:.3e} below tolerance at t={t:.6g} with dt={dt:.3e}"
        )
        self.t = t
        self.dt = dt
        self.worst = worst


class LinearSolveFailure(RuntimeError):
    """Tridiagonal diffusion solve failed (cannot occur for dt > 0)."""


class Scheme(Enum):
    BACKWARD_EULER = "backward_euler"
    CRANK_NICOLSON = "crank_nicolson"


@dataclass(frozen=True)
class State:
    """Three non-negative concentration fields at a time instant."""

    system: ReactionSystem
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    t: float = 0.0

    @property
    def fields(self) -> tuple:
        return (self.a, self.b, self.c)

    def min_value(self) -> float:
        return float(min(self.a.min(), self.b.min(), self.c.min()))


def make_state(system: ReactionSystem, a, b, c, t: float = 0.0) -> State:
    return State(
        system,
        np.array(a, dtype=float),
        np.array(b, dtype=float),
        np.array(c, dtype=float),
        float(t),
    )


@dataclass
class SolverConfig:
    """Numerical parameters of a run.

    dt_init defaults to 0.01 / max(1, largest mass); diffusion is implicit,
    so the step size only has to resolve the reaction timescale.
    """

    params: Params
    scheme: Scheme = Scheme.BACKWARD_EULER
    dt_init: float | None = None
    dt_min: float | None = None
    t_end: float = 1.0
    record_every: int = 10
    positivity_tol: float = 1e-13

    def resolved_steps(self, masses: Masses) -> tuple:
        dt0 = self.dt_init
        if dt0 is None:
            dt0 = 0.01 / max(1.0, max(masses.values))
        dt_min = self.dt_min if self.dt_min is not None else dt0 * 2.0**-20
        if dt_min > dt0:
            raise ValueError("dt_min must not exceed dt_init")
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        return dt0, dt_min


@dataclass(frozen=True)
class TrajectorySample:
    """Scalar diagnostics recorded along a run."""

    t: float
    masses: tuple
    min_conc: float
    dist_pos: float
    dist_bnd: float
    entropy: float
    dissipation: float
    omega_measure: float


@dataclass
class Trajectory:
    system: ReactionSystem
    mesh: Mesh
    samples: list
    states: list
    masses0: Masses
    equilibria: EquilibriumSet
    omega_threshold: float

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.samples])

    @property
    def final_state(self) -> State:
        return self.states[-1]


def reaction_substep(state: State, dt: float) -> tuple:
    """Explicit Euler update of the reaction terms (no diffusion)."""
    fa, fb, fc = reaction_rhs(state.system, state.a, state.b, state.c)
    return state.a + dt * fa, state.b + dt * fb, state.c + dt * fc


def _diffusion_banded(n: int, h: float, mu: float) -> np.ndarray:
    """Banded form of I - mu*Laplacian with mirrored-ghost boundary rows."""
    r = mu / h**2
    ab = np.zeros((3, n))
    ab[0, 1:] = -r
    ab[1, :] = 1.0 + 2.0 * r
    ab[1, 0] = 1.0 + r
    ab[1, -1] = 1.0 + r
    ab[2, :-1] = -r
    return ab


def _diffuse(f: np.ndarray, d: float, dt: float, mesh: Mesh, scheme: Scheme) -> np.ndarray:
    if scheme is Scheme.BACKWARD_EULER:
        ab = _diffusion_banded(mesh.n_cells, mesh.h, d * dt)
        rhs = f
    else:
        ab = _diffusion_banded(mesh.n_cells, mesh.h, 0.5 * d * dt)
        rhs = f + 0.5 * d * dt * laplacian_neumann(f, mesh)
    try:
        return solve_banded((1, 1), ab, rhs, overwrite_ab=True, check_finite=False)
    except LinAlgError as exc:  # defensive: SPD for any dt > 0
        raise LinearSolveFailure(str(exc)) from exc


def _attempt(state: State, dt: float, mesh: Mesh, config: SolverConfig):
    """One split step at fixed dt; returns fields or the worst negative value."""
    tol = config.positivity_tol
    fields = list(reaction_substep(state, dt))
    worst = min(f.min() for f in fields)
    if worst < -tol:
        return None, worst
    d = config.params.diffusion
    out = []
    for f, di in zip(fields, d):
        np.clip(f, 0.0, None, out=f)
        g = _diffuse(f, di, dt, mesh, config.scheme)
        out.append(g)
    worst = min(g.min() for g in out)
    if worst < -tol:
        return None, worst
    for g in out:
        np.clip(g, 0.0, None, out=g)
    return out, worst


def step(state: State, dt: float, mesh: Mesh, config: SolverConfig) -> State:
    """Advance one accepted step, halving dt on positivity rejections."""
    dt_min = config.dt_min if config.dt_min is not None else dt * 2.0**-20
    dt_try = dt
    while True:
        fields, worst = _attempt(state, dt_try, mesh, config)
        if fields is not None:
            return State(state.system, fields[0], fields[1], fields[2], state.t + dt_try)
        if dt_try <= dt_min * (1.0 + 1e-12):
            raise PositivityFailure(state.t, dt_try, worst)
        dt_try = max(0.5 * dt_try, dt_min)


def rhs_full(state: State, params: Params, mesh: Mesh) -> tuple:
    """Exact time derivative d*Lap(z) + f_z of each species field."""
    fa, fb, fc = reaction_rhs(state.system, state.a, state.b, state.c)
    return (
        params.d1 * laplacian_neumann(state.a, mesh) + fa,
        params.d2 * laplacian_neumann(state.b, mesh) + fb,
        params.d3 * laplacian_neumann(state.c, mesh) + fc,
    )


def _distance(state: State, eq: tuple, mesh: Mesh) -> float:
    return math.sqrt(
        l2_norm(state.a - eq[0], mesh) ** 2
        + l2_norm(state.b - eq[1], mesh) ** 2
        + l2_norm(state.c - eq[2], mesh) ** 2
    )


def omega_threshold(system: ReactionSystem, masses: Masses, eqs: EquilibriumSet) -> float:
    """Default catalyst superlevel threshold recorded along trajectories.

    m1 < m2 uses the mass-gap value (m2-m1)/2 that feeds the entropy
    inequality; in coexistence half the positive-equilibrium catalyst value
    is tracked; in the boundary regime half of m2 monitors catalyst decay.
    P2 tracks half of the equal-share equilibrium value.
    """
    if system is ReactionSystem.P2:
        return masses.total / 6.0
    m1, m2 = masses.m1, masses.m2
    if m1 < m2:
        return 0.5 * (m2 - m1)
    if eqs.positive is not None:
        return 0.5 * eqs.positive[1]
    return 0.5 * m2


def diagnostics_sample(
    state: State,
    mesh: Mesh,
    params: Params,
    eqs: EquilibriumSet,
    threshold: float,
) -> TrajectorySample:
    masses = compute_masses(state, mesh)
    dist_pos = _distance(state, eqs.positive, mesh) if eqs.positive else math.nan
    dist_bnd = (
        min(_distance(state, eq, mesh) for eq in eqs.boundary)
        if eqs.boundary
        else math.nan
    )
    if state.system is ReactionSystem.P1:
        if eqs.positive is not None:
            ent = _entropy.relative_entropy_ac(
                state.a, state.c, eqs.positive[0], eqs.positive[2], mesh
            )
        else:
            ent = math.nan
        dis = _entropy.dissipation_p1(state, params, mesh).total
    else:
        if eqs.positive is not None:
            ent = _entropy.boltzmann_entropy_p2(state, eqs.positive, mesh)
        else:
            ent = math.nan
        dis = _entropy.dissipation_p2(state, params, mesh).total
    return TrajectorySample(
        t=state.t,
        masses=masses.values,
        min_conc=state.min_value(),
        dist_pos=dist_pos,
        dist_bnd=dist_bnd,
        entropy=ent,
        dissipation=dis,
        omega_measure=_entropy.superlevel_measure(state.b, threshold, mesh),
    )


def simulate(initial: State, mesh: Mesh, config: SolverConfig) -> Trajectory:
    """Integrate to t_end, recording diagnostics every record_every steps.

    The initial and final states are always recorded.  Errors raised by
    ``step`` propagate with the failing time attached.
    """
    if initial.min_value() < 0:
        raise ValueError("initial data must be non-negative")
    masses0 = compute_masses(initial, mesh)
    eqs = classify_equilibria(initial.system, masses0)
    threshold = omega_threshold(initial.system, masses0, eqs)
    dt0, dt_min = config.resolved_steps(masses0)
    config = replace(config, dt_init=dt0, dt_min=dt_min)

    samples = [diagnostics_sample(initial, mesh, config.params, eqs, threshold)]
    states = [initial]
    state = initial
    accepted = 0
    last_recorded = 0
    t_end = config.t_end
    eps_end = 1e-12 * max(1.0, t_end)  # avoid recording roundoff-sliver steps
    while t_end - state.t > eps_end:
        dt_req = min(dt0, t_end - state.t)
        state = step(state, dt_req, mesh, config)
        accepted += 1
        if accepted % config.record_every == 0:
            samples.append(diagnostics_sample(state, mesh, config.params, eqs, threshold))
            states.append(state)
            last_recorded = accepted
    if accepted and last_recorded != accepted:
        samples.append(diagnostics_sample(state, mesh, config.params, eqs, threshold))
        states.append(state)
    return Trajectory(
        system=initial.system,
        mesh=mesh,
        samples=samples,
        states=states,
        masses0=masses0,
        equilibria=eqs,
        omega_threshold=threshold,
    )
