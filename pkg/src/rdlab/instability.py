"""Bootstrap-instability experiments around boundary equilibria.

A small perturbation of size delta is planted on the depleted species, the
full nonlinear system is evolved, and the growth of the combined norm
||u||_2 + ||u_t||_2 is compared against the closed-form solution of the
averaged linear system.  The escape time is the first record where that norm
reaches the order-one threshold tau, and the leading deviation from the
linear solution scales like delta^2.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm

from .entropy import DecayFit, loglinear_fit
from .grid import Mesh, h2_norm, integrate, l2_norm, laplacian_neumann
from .model import (
    Masses,
    Params,
    ReactionSystem,
    RegimeMismatch,
    classify_equilibria,
    reaction_jacobian,
    reaction_jacobian_apply,
    reaction_rhs,
)
from .solver import SolverConfig, State, rhs_full, simulate

FIT_SAFETY_FACTOR = 2.0  # growth fit uses records below tau / this factor


class RateNonPositive(RegimeMismatch):
    """The averaged linear growth rate is not positive; experiment refused."""


class ProbeAfterEscape(RuntimeError):
    """t_probe falls beyond an empirical escape time."""


class DegenerateDeviation(RuntimeError):
    """Measured deviations are numerically zero; no scaling exponent exists."""


@dataclass(frozen=True)
class PerturbationSpec:
    """Initial perturbation shape, normalized to combined norm one.

    ``uniform_depleted`` places a homogeneous bump on every species whose
    boundary value is zero (the catalyst for the catalytic system; for the
    symmetric system the bump is split equally over the two depleted
    species, which leaves the decaying branch of the averaged linear flow
    unexcited).  ``mode`` uses cos(k*pi*x) profiles with per-species
    weights; ``fields`` carries explicit profiles.
    """

    delta: float
    kind: str
    mode_k: int = 0
    weights: tuple = (0.0, 1.0, 0.0)
    fields: np.ndarray | None = None

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.kind not in ("uniform_depleted", "mode", "fields"):
            raise ValueError(f"unknown perturbation kind {self.kind!r}")

    @classmethod
    def uniform_depleted(cls, delta: float) -> "PerturbationSpec":
        return cls(delta=delta, kind="uniform_depleted")

    @classmethod
    def mode(cls, delta: float, k: int, weights) -> "PerturbationSpec":
        return cls(delta=delta, kind="mode", mode_k=int(k), weights=tuple(weights))

    @classmethod
    def from_fields(cls, delta: float, fields) -> "PerturbationSpec":
        arr = np.array(fields, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != 3:
            raise ValueError("fields must have shape (3, n_cells)")
        return cls(delta=delta, kind="fields", fields=arr)

    def with_delta(self, delta: float) -> "PerturbationSpec":
        return replace(self, delta=delta)


@dataclass(frozen=True)
class InstabilitySample:
    t: float
    y_low: float
    y_high: float
    dev_avg: float
    dist_eq: float
    min_conc: float
    nonlinear_norm: float
    ratio_energy: float
    ratio_nonlinear: float


@dataclass
class InstabilityReport:
    samples: list
    fitted_rate: DecayFit | None
    growth_rate_fitted: float | None
    c_l_emp: float | None
    escape_time_empirical: float | None
    escape_time_theoretical: float
    rate_linear: float
    delta: float
    tau: float
    boundary_eq: tuple
    empirical_constants: dict
    deviation_scaling_exponent: float | None = None

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.samples])


def _agg_l2(fields, mesh: Mesh) -> float:
    return math.sqrt(sum(l2_norm(f, mesh) ** 2 for f in fields))


def _agg_h2(fields, mesh: Mesh) -> float:
    return math.sqrt(sum(h2_norm(f, mesh) ** 2 for f in fields))


def apply_linearization(system, params: Params, eq: tuple, u_fields, mesh: Mesh) -> tuple:
    """Linearized right-hand side diag(d)*Lap(u) + J(eq)*u."""
    jac_u = reaction_jacobian_apply(system, eq, u_fields)
    d = params.diffusion
    return tuple(
        di * laplacian_neumann(np.asarray(u, dtype=float), mesh) + j
        for di, u, j in zip(d, u_fields, jac_u)
    )


def perturbation_norms(state: State, eq: tuple, params: Params, mesh: Mesh) -> tuple:
    """Low and high perturbation norms of a state around an equilibrium.

    low = ||u||_2 + ||u_t||_2 and high = ||u||_{H^2} + ||u_t||_2, with u_t
    evaluated exactly from the right-hand side, never by time differencing.
    """
    u = (state.a - eq[0], state.b - eq[1], state.c - eq[2])
    ut = rhs_full(state, params, mesh)
    utn = _agg_l2(ut, mesh)
    return _agg_l2(u, mesh) + utn, _agg_h2(u, mesh) + utn


def linear_avg_solution_p1(y0_averages: tuple, rate: float, t: float) -> tuple:
    """Species averages of the averaged linear flow around the catalytic
    boundary equilibrium: the catalyst average grows like exp(rate*t) and
    drags the other two with opposite signs."""
    a1, a2, a3 = y0_averages
    g = a2 * math.exp(rate * t)
    return (g - a2 + a1, g, -g + a2 + a3)


def linear_avg_solution_p2(y0_averages: tuple, a_bar: float, t: float) -> tuple:
    """Species averages of the averaged linear flow around (a_bar, 0, 0)."""
    a1, a2, a3 = y0_averages
    c1 = 0.5 * (a2 + a3)
    c2 = 0.5 * (a2 - a3)
    c3 = a1 + a2 + a3
    grow = c1 * math.exp(a_bar * t)
    decay = c2 * math.exp(-3.0 * a_bar * t)
    return (-2.0 * grow + c3, grow + decay, grow - decay)


def escape_time_theoretical(theta0: float, delta: float, rate: float) -> float:
    """ln(theta0/delta)/rate, the time a delta-perturbation needs to reach theta0."""
    if rate <= 0:
        raise RateNonPositive(f"rate {rate} must be positive")
    if not 0 < delta < theta0:
        raise ValueError("need 0 < delta < theta0")
    return math.log(theta0 / delta) / rate


def _p2_canonical_order(boundary_eq: tuple) -> tuple:
    nz = int(np.argmax(boundary_eq))
    rest = [i for i in range(3) if i != nz]
    return (nz, rest[0], rest[1])


def build_initial_condition(
    spec: PerturbationSpec,
    system: ReactionSystem,
    params: Params,
    boundary_eq: tuple,
    mesh: Mesh,
) -> tuple:
    """Initial state eq + delta*y0hat with the combined norm of y0hat one.

    The normalization uses the linearized time derivative (the small-delta
    limit of the induced u_t), so ||y(0)|| = delta up to O(delta^2).
    Returns (state, y0hat_fields, y0hat_averages).
    """
    n = mesh.n_cells
    if spec.kind == "uniform_depleted":
        p = [np.full(n, 1.0) if z == 0.0 else np.zeros(n) for z in boundary_eq]
        if not any(f[0] > 0 for f in p):
            raise ValueError("no depleted species to perturb")
    elif spec.kind == "mode":
        profile = np.cos(spec.mode_k * math.pi * mesh.centers)
        p = [w * profile for w in spec.weights]
    else:
        if spec.fields.shape != (3, n):
            raise ValueError("stored fields do not match the mesh")
        p = [spec.fields[i].astype(float) for i in range(3)]
    lin = apply_linearization(system, params, boundary_eq, p, mesh)
    norm = _agg_l2(p, mesh) + _agg_l2(lin, mesh)
    if norm == 0.0:
        raise ValueError("perturbation shape is identically zero")
    yhat = [f / norm for f in p]
    fields = [eq_z + spec.delta * f for eq_z, f in zip(boundary_eq, yhat)]
    if min(f.min() for f in fields) < 0:
        raise ValueError("perturbation drives the initial data negative; reduce delta")
    state = State(system, fields[0], fields[1], fields[2], 0.0)
    averages = tuple(integrate(f, mesh) for f in yhat)
    return state, yhat, averages


def _linear_rate(system: ReactionSystem, boundary_eq: tuple) -> float:
    if system is ReactionSystem.P1:
        return boundary_eq[2] - boundary_eq[0]
    return float(max(boundary_eq))


def run_instability(
    system: ReactionSystem,
    params: Params,
    masses: Masses,
    boundary_eq: tuple,
    spec: PerturbationSpec,
    *,
    t_max: float,
    mesh: Mesh,
    config: SolverConfig,
    tau: float | None = None,
) -> InstabilityReport:
    """Evolve a delta-perturbation of a boundary equilibrium and report.

    Per record: the low/high perturbation norms, the summed deviation of the
    species averages from the averaged linear solution, and the empirical
    ratios behind the energy and nonlinear bounds.  The growth rate is
    fitted on the last half of the pre-escape records with y_low below
    tau/2; the lower cut discards the transient in which the perturbation
    has not yet aligned with the growing direction of the linear flow.
    """
    eqs = classify_equilibria(system, masses)
    if not any(np.allclose(eq, boundary_eq, rtol=1e-10, atol=1e-12) for eq in eqs.boundary):
        raise RegimeMismatch(
            f"{tuple(boundary_eq)} is not a boundary equilibrium for masses {masses.values}"
        )
    rate = _linear_rate(system, boundary_eq)
    if rate <= 0:
        raise RateNonPositive(
            f"averaged linear rate {rate:.6g} is not positive; boundary equilibrium stable"
        )
    if tau is None:
        tau = 0.05 * min(masses.values)

    # the symmetric network is invariant under species relabeling: work in
    # coordinates where the occupied species comes first
    if system is ReactionSystem.P2:
        order = _p2_canonical_order(boundary_eq)
        d = params.diffusion
        params_c = Params(d[order[0]], d[order[1]], d[order[2]])
        eq_c = tuple(boundary_eq[i] for i in order)
        spec_c = spec
        if spec.kind == "mode":
            spec_c = replace(spec, weights=tuple(spec.weights[i] for i in order))
        elif spec.kind == "fields":
            spec_c = replace(spec, fields=spec.fields[list(order)])
    else:
        if boundary_eq[1] != 0.0:
            raise RegimeMismatch("catalytic boundary equilibria have b = 0")
        params_c, eq_c, spec_c = params, tuple(boundary_eq), spec

    initial, yhat, yhat_avg = build_initial_condition(spec_c, system, params_c, eq_c, mesh)
    run_cfg = replace(config, params=params_c, t_end=t_max)
    traj = simulate(initial, mesh, run_cfg)

    delta = spec.delta
    avg0 = tuple(delta * v for v in yhat_avg)
    samples = []
    low_sq_int = 0.0
    prev_t, prev_low = 0.0, None
    low0_sq = None
    for state in traj.states:
        u = (state.a - eq_c[0], state.b - eq_c[1], state.c - eq_c[2])
        ut = rhs_full(state, params_c, mesh)
        utn = _agg_l2(ut, mesh)
        low = _agg_l2(u, mesh) + utn
        high = _agg_h2(u, mesh) + utn
        if prev_low is not None:
            low_sq_int += 0.5 * (low**2 + prev_low**2) * (state.t - prev_t)
        else:
            low0_sq = low**2
        prev_t, prev_low = state.t, low

        means = tuple(integrate(f, mesh) for f in u)
        if system is ReactionSystem.P1:
            lin = linear_avg_solution_p1(avg0, rate, state.t)
        else:
            lin = linear_avg_solution_p2(avg0, rate, state.t)
        dev = sum(abs(m - v) for m, v in zip(means, lin))

        n1 = tuple(
            f - j
            for f, j in zip(
                reaction_rhs(system, *state.fields),
                reaction_jacobian_apply(system, eq_c, u),
            )
        )
        dn1 = reaction_jacobian_apply(system, u, ut)
        nonlinear = _agg_l2(n1, mesh) + _agg_l2(dn1, mesh)
        ratio_energy = high**2 / (low_sq_int + low0_sq)
        ratio_nl = nonlinear / high**2 if high > 0 else math.nan
        samples.append(
            InstabilitySample(
                t=state.t,
                y_low=low,
                y_high=high,
                dev_avg=dev,
                dist_eq=_agg_l2(u, mesh),
                min_conc=state.min_value(),
                nonlinear_norm=nonlinear,
                ratio_energy=ratio_energy,
                ratio_nonlinear=ratio_nl,
            )
        )

    escape = next((s.t for s in samples if s.y_low >= tau), None)

    fit_cap = tau / FIT_SAFETY_FACTOR
    window = []
    for s in samples:
        if s.y_low > fit_cap:
            break
        if s.y_low > 0:
            window.append(s)
    window = window[len(window) // 2 :]
    if len(window) >= 10:
        c_fit, alpha, resid = loglinear_fit(
            [s.t for s in window], [s.y_low for s in window]
        )
        fitted = DecayFit(c_fit, alpha, (window[0].t, window[-1].t), resid)
        growth = -alpha
        c_l_emp = c_fit / delta
        t_theo = math.log(tau / (c_l_emp * delta)) / rate
    else:
        fitted, growth, c_l_emp, t_theo = None, None, None, math.nan

    pre_escape = [s for s in samples if s.t > 0 and (escape is None or s.t <= escape)]
    constants = {
        "c_sigma": max(s.ratio_energy for s in samples),
        "c_n": max(
            (s.ratio_nonlinear for s in samples if math.isfinite(s.ratio_nonlinear)),
            default=math.nan,
        ),
        "c_p": min(
            (s.y_low / (delta * math.exp(rate * s.t)) for s in pre_escape),
            default=math.nan,
        ),
    }
    return InstabilityReport(
        samples=samples,
        fitted_rate=fitted,
        growth_rate_fitted=growth,
        c_l_emp=c_l_emp,
        escape_time_empirical=escape,
        escape_time_theoretical=t_theo,
        rate_linear=rate,
        delta=delta,
        tau=tau,
        boundary_eq=tuple(boundary_eq),
        empirical_constants=constants,
    )


def _fit_power_law(deltas, devs) -> float:
    deltas = np.asarray(deltas, dtype=float)
    devs = np.asarray(devs, dtype=float)
    if np.any(devs <= 1e-250):
        raise DegenerateDeviation(
            "deviation from the linear solution vanishes; nonlinearity inactive"
        )
    slope = np.polyfit(np.log(deltas), np.log(devs), 1)[0]
    return float(slope)


def deviation_scaling(
    system: ReactionSystem,
    params: Params,
    masses: Masses,
    boundary_eq: tuple,
    spec: PerturbationSpec,
    deltas,
    t_probe: float,
    *,
    mesh: Mesh,
    config: SolverConfig,
    tau: float | None = None,
) -> float:
    """Exponent of the deviation-from-linear scaling in delta.

    Runs the experiment once per delta up to t_probe, measures the averaged
    deviation there, and fits log(dev) against log(delta); the quadratic
    nonlinearity forces a slope near two.
    """
    deltas = [float(d) for d in deltas]
    if len(deltas) < 2:
        raise ValueError("need at least two deltas")
    devs = []
    for d in deltas:
        report = run_instability(
            system,
            params,
            masses,
            boundary_eq,
            spec.with_delta(d),
            t_max=t_probe,
            mesh=mesh,
            config=config,
            tau=tau,
        )
        if report.escape_time_empirical is not None:
            raise ProbeAfterEscape(
                f"delta {d:g} escapes at t={report.escape_time_empirical:.4g} <= {t_probe}"
            )
        devs.append(report.samples[-1].dev_avg)
    return _fit_power_law(deltas, devs)


def linear_solution_fields(
    system: ReactionSystem,
    params: Params,
    boundary_eq: tuple,
    u0_fields,
    t: float,
    mesh: Mesh,
    n_modes: int | None = None,
) -> tuple:
    """Full-field linear evolution via per-mode matrix exponentials.

    Optional refinement of the averaged (mode-zero) comparison; capped at 64
    modes, each a 3x3 exponential on the discrete stencil eigenvalue.
    """
    n = mesh.n_cells
    if n_modes is None:
        n_modes = min(64, n)
    if n_modes > 64:
        raise ValueError("matrix-exponential refinement is capped at 64 modes")
    if n_modes > n:
        raise ValueError("more modes than mesh cells")
    x = mesh.centers
    basis = np.empty((n_modes, n))
    basis[0] = 1.0
    for k in range(1, n_modes):
        basis[k] = math.sqrt(2.0) * np.cos(k * math.pi * x)
    u0 = np.array([np.asarray(f, dtype=float) for f in u0_fields])
    coeffs = u0 @ basis.T * mesh.h  # (3, n_modes)
    jac = reaction_jacobian(system, *boundary_eq)
    d = np.diag(params.diffusion)
    out = np.zeros((3, n))
    for k in range(n_modes):
        lam = -2.0 / mesh.h**2 * (1.0 - math.cos(k * math.pi * mesh.h))
        w = expm((d * lam + jac) * t) @ coeffs[:, k]
        out += np.outer(w, basis[k])
    return out[0], out[1], out[2]
