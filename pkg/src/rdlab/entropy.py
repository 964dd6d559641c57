"""Entropy functionals, dissipations, rate certificates, and decay fitting.

The relative entropy of a field z against a positive reference z* is
int[z*log(z/z*) - z + z*] with the 0*log(0) = 0 convention.  Fisher terms
int |grad z|^2 / z are discretized at faces with the arithmetic face mean,
floored at 1e-300 so that exact zeros never produce NaN while no value above
the denormal range is perturbed.
"""

import math
from dataclasses import dataclass

import numpy as np

from .grid import Mesh, face_differences, integrate, l2_norm, poincare_constants
from .model import (
    Masses,
    Params,
    ReactionSystem,
    Regime,
    RegimeMismatch,
    classify_equilibria,
    compute_masses,
)

EPS_LOG = 1e-300
FIT_FLOOR = 1e-12


class EmptyOmega(RuntimeError):
    """The catalyst superlevel set is empty; the inequality breaks down."""


class InsufficientData(ValueError):
    """Fewer than 10 usable samples in the fit window."""


@dataclass(frozen=True)
class DecayFit:
    """Log-linear fit value(t) ~ C * exp(-alpha * t)."""

    C: float
    alpha: float
    window: tuple
    residual: float


def _entropy_integrand(z: np.ndarray, z_star: float) -> np.ndarray:
    if z_star <= 0:
        raise ValueError("reference value must be positive")
    z = np.asarray(z, dtype=float)
    out = np.full_like(z, z_star)  # z = 0 contributes z_star
    pos = z > 0
    zp = z[pos]
    out[pos] = zp * np.log(zp / z_star) - zp + z_star
    return out


def relative_entropy_ac(a, c, a_star: float, c_star: float, mesh: Mesh) -> float:
    """Relative entropy of the a and c fields only; non-negative."""
    return integrate(_entropy_integrand(a, a_star), mesh) + integrate(
        _entropy_integrand(c, c_star), mesh
    )


def _fisher(f, mesh: Mesh) -> float:
    """int |grad f|^2 / f with face means; faces touching a zero cell drop out."""
    f = np.asarray(f, dtype=float)
    d = face_differences(f, mesh)
    face = np.maximum(0.5 * (f[:-1] + f[1:]), EPS_LOG)
    active = (f[:-1] > EPS_LOG) & (f[1:] > EPS_LOG)
    return float(np.sum(np.where(active, d * d / face, 0.0)) * mesh.h)


def _log_ratio(num, den) -> np.ndarray:
    return np.log(np.maximum(num, EPS_LOG)) - np.log(np.maximum(den, EPS_LOG))


@dataclass(frozen=True)
class DissipationP1:
    fisher_a: float
    fisher_c: float
    reaction: float
    total: float


def dissipation_p1(state, params: Params, mesh: Mesh) -> DissipationP1:
    """Entropy dissipation of the catalytic system.

    d1*int|grad a|^2/a + d3*int|grad c|^2/c + int b(c-a)log(c/a); every term
    is non-negative because (c-a) and log(c/a) share their sign.
    """
    fa = params.d1 * _fisher(state.a, mesh)
    fc = params.d3 * _fisher(state.c, mesh)
    reaction = integrate(state.b * (state.c - state.a) * _log_ratio(state.c, state.a), mesh)
    return DissipationP1(fa, fc, reaction, fa + fc + reaction)


def boltzmann_entropy_p2(state, eq: tuple, mesh: Mesh) -> float:
    """Relative Boltzmann entropy of all three species against a positive triple."""
    if min(eq) <= 0:
        raise ValueError("reference equilibrium must be strictly positive")
    return (
        integrate(_entropy_integrand(state.a, eq[0]), mesh)
        + integrate(_entropy_integrand(state.b, eq[1]), mesh)
        + integrate(_entropy_integrand(state.c, eq[2]), mesh)
    )


@dataclass(frozen=True)
class DissipationP2:
    fisher_a: float
    fisher_b: float
    fisher_c: float
    reaction_bc: float
    reaction_ac: float
    reaction_ab: float
    total: float


def dissipation_p2(state, params: Params, mesh: Mesh) -> DissipationP2:
    """Boltzmann entropy dissipation of the symmetric system."""
    a, b, c = state.a, state.b, state.c
    fa = params.d1 * _fisher(a, mesh)
    fb = params.d2 * _fisher(b, mesh)
    fc = params.d3 * _fisher(c, mesh)
    r_bc = integrate(a * (b - c) * _log_ratio(b, c), mesh)
    r_ac = integrate(b * (a - c) * _log_ratio(a, c), mesh)
    r_ab = integrate(c * (a - b) * _log_ratio(a, b), mesh)
    return DissipationP2(fa, fb, fc, r_bc, r_ac, r_ab, fa + fb + fc + r_bc + r_ac + r_ab)


def superlevel_measure(b, threshold: float, mesh: Mesh) -> float:
    """Measure of the set {x : b(x) >= threshold}."""
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    b = np.asarray(b, dtype=float)
    return float(np.count_nonzero(b >= threshold)) * mesh.h


def eed_constant(k_bound: float, delta: float, a_star: float, c_pw: float) -> float:
    """Entropy--entropy-dissipation constant for a superlevel set of measure delta.

    lambda = min{1, 1/(K*C_PW)} * a_star / (1 + 3/delta); the reciprocal has
    the form C*(1 + 1/delta) with C independent of the set (see
    ``eed_constant_parts``).
    """
    if min(k_bound, delta, a_star, c_pw) <= 0:
        raise ValueError("all arguments must be positive")
    if delta > 1:
        raise ValueError("delta is a measure inside the unit domain, so delta <= 1")
    return min(1.0, 1.0 / (k_bound * c_pw)) * a_star / (1.0 + 3.0 / delta)


def eed_constant_parts(k_bound: float, delta: float, a_star: float, c_pw: float) -> dict:
    lam = eed_constant(k_bound, delta, a_star, c_pw)
    m = min(1.0, 1.0 / (k_bound * c_pw))
    return {
        "lambda": lam,
        "min_factor": m,
        "reciprocal": (1.0 + 3.0 / delta) / (m * a_star),
        "reciprocal_coefficient": (1.0 + 3.0 / delta) / (m * a_star) / (1.0 + 1.0 / delta),
    }


@dataclass(frozen=True)
class EedCheck:
    lhs: float
    rhs: float
    satisfied: bool
    lam: float
    omega_measure: float
    threshold: float
    k_bound: float


def eed_check(
    state,
    eq: tuple,
    params: Params,
    mesh: Mesh,
    threshold: float | None = None,
    k_bound: float | None = None,
) -> EedCheck:
    """Check the functional inequality D-parts >= lambda * E on one state.

    lhs collects the two Fisher terms (without diffusion weights) and the
    squared a-c gap on the catalyst superlevel set; rhs is lambda times the
    relative entropy, with lambda built from the measured set size and the
    supplied (or state's own) sup-norm bound.
    """
    masses = compute_masses(state, mesh)
    if eq is None or min(eq[0], eq[2]) <= 0:
        raise RegimeMismatch("a positive equilibrium is required")
    if threshold is None:
        if masses.m1 >= masses.m2:
            raise RegimeMismatch(
                "default threshold (m2-m1)/2 needs m1 < m2; pass threshold explicitly"
            )
        threshold = 0.5 * (masses.m2 - masses.m1)
    omega = superlevel_measure(state.b, threshold, mesh)
    if omega == 0.0:
        raise EmptyOmega("no cell reaches the catalyst threshold")
    if k_bound is None:
        k_bound = float(max(state.a.max(), state.b.max(), state.c.max()))
    gap = state.c - state.a
    mask = np.asarray(state.b, dtype=float) >= threshold
    omega_term = float(np.sum(np.where(mask, gap * gap, 0.0)) * mesh.h)
    lhs = _fisher(state.a, mesh) + _fisher(state.c, mesh) + omega_term
    lam = eed_constant(k_bound, omega, eq[0], poincare_constants(mesh).c_pw)
    rhs = lam * relative_entropy_ac(state.a, state.c, eq[0], eq[2], mesh)
    return EedCheck(lhs, rhs, lhs >= rhs, lam, omega, threshold, k_bound)


def lyapunov_p1_boundary(u_fields, beta: float, mesh: Mesh) -> float:
    """Weighted squared norm ||u1||^2 + beta*||u2||^2 + ||u3||^2."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    u1, u2, u3 = u_fields
    return (
        l2_norm(u1, mesh) ** 2 + beta * l2_norm(u2, mesh) ** 2 + l2_norm(u3, mesh) ** 2
    )


@dataclass(frozen=True)
class RateCertificate:
    """Theoretical constants valid for a given regime.

    Only the fields meaningful for the regime are populated.  kappa1 is the
    entropy decay rate lower bound, boundary_drift the mean offset between
    the a and c boundary values, beta/mu/alpha3 the boundary-stability
    Lyapunov constants, alpha4 the symmetric-system rate, growth_rate the
    averaged linear growth rate around the boundary equilibrium.
    """

    regime: Regime
    growth_rate: float | None = None
    kappa1: float | None = None
    eed_lambda: float | None = None
    boundary_drift: float | None = None
    beta: float | None = None
    mu: float | None = None
    alpha3: float | None = None
    alpha4: float | None = None
    extras: dict | None = None


def _boundary_lyapunov_constants(drift: float, d_tilde: tuple) -> tuple:
    """Grid search of mu in (mu*, 1) maximizing alpha3 for the boundary regime."""
    dt1, dt2, dt3 = d_tilde
    mu_star = 1.0 - drift / (2.0 * dt2)
    lo = max(mu_star, 0.0) + 1e-9
    mus = np.linspace(lo, 1.0 - 1e-9, 4000)
    den = mus * dt2 - dt2 + 0.5 * drift
    valid = den > 0
    mus = mus[valid]
    den = den[valid]
    beta = np.maximum.reduce(
        [drift / (mus * dt1), drift / (mus * dt3), (dt1 + dt3) / den]
    )
    alpha3 = (1.0 - mus) * np.minimum.reduce(
        [np.full_like(mus, dt1), beta * dt2, np.full_like(mus, dt3)]
    )
    i = int(np.argmax(alpha3))
    return float(beta[i]), float(mus[i]), float(alpha3[i])


def rate_certificate(
    system: ReactionSystem,
    params: Params,
    masses: Masses,
    regime: Regime,
    k_bound: float,
    mesh: Mesh | None = None,
) -> RateCertificate:
    """Closed-form rate constants for the requested regime.

    The spectral-gap constant is the continuum pi^2 unless a mesh is given,
    in which case the discrete stencil gap is used.  kappa1 uses the
    empirical sup-norm bound in place of the non-constructive uniform bound.
    """
    actual = classify_equilibria(system, masses).regime
    if actual is not regime:
        raise RegimeMismatch(f"masses {masses.values} imply regime {actual.value}")
    if mesh is None:
        p_gap = math.pi**2
        c_pw = 1.0 / p_gap
    else:
        pc = poincare_constants(mesh)
        p_gap, c_pw = pc.p_gap, pc.c_pw

    if system is ReactionSystem.P2:
        m = masses.total
        alpha4 = min(3.0, p_gap * params.d1, p_gap * params.d2, p_gap * params.d3)
        return RateCertificate(regime=regime, alpha4=alpha4, growth_rate=m)

    m1, m2 = masses.m1, masses.m2
    growth = 2.0 * m2 - m1 if m1 >= m2 else None

    if regime is Regime.POSITIVE_ONLY:
        if k_bound <= 0:
            raise ValueError("k_bound must be positive")
        delta = (m2 - m1) / (2.0 * k_bound)
        lam = eed_constant(k_bound, min(delta, 1.0), 0.5 * m1, c_pw)
        kappa1 = min(params.d1, params.d3, delta) * lam
        extras = {"kappa2": min(0.5 * kappa1, params.d2 * p_gap), "delta": delta}
        return RateCertificate(
            regime=regime, kappa1=kappa1, eed_lambda=lam, extras=extras
        )

    if regime is Regime.COEXISTENCE:
        return RateCertificate(regime=regime, growth_rate=growth)

    # boundary regime: drift = mean(a) - mean(c) at the boundary equilibrium
    drift = m1 - 2.0 * m2
    if drift <= 0:
        return RateCertificate(regime=regime, growth_rate=growth, boundary_drift=drift)
    d_tilde = (params.d1 * p_gap, params.d2 * p_gap, params.d3 * p_gap)
    beta, mu, alpha3 = _boundary_lyapunov_constants(drift, d_tilde)
    return RateCertificate(
        regime=regime,
        growth_rate=growth,
        boundary_drift=drift,
        beta=beta,
        mu=mu,
        alpha3=alpha3,
    )


def loglinear_fit(times, values) -> tuple:
    """Least-squares fit of log(value) vs t; returns (C, alpha, residual)."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    logs = np.log(v)
    slope, intercept = np.polyfit(t, logs, 1)
    resid = math.sqrt(float(np.mean((logs - (intercept + slope * t)) ** 2)))
    return math.exp(intercept), -slope, resid


def fit_decay_rate(times, values) -> DecayFit:
    """Fit value ~ C*exp(-alpha*t) on the last half of samples above 1e-12.

    The windowing discards the early nonlinear transient, where no single
    exponential rate applies; alpha is negative for growing series.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape:
        raise ValueError("times and values must have equal length")
    keep = v > FIT_FLOOR
    t, v = t[keep], v[keep]
    t, v = t[len(t) // 2 :], v[len(v) // 2 :]
    if len(t) < 10:
        raise InsufficientData(f"only {len(t)} samples above {FIT_FLOOR} in the window")
    c, alpha, resid = loglinear_fit(t, v)
    return DecayFit(C=c, alpha=alpha, window=(float(t[0]), float(t[-1])), residual=resid)
