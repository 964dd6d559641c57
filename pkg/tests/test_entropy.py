import math

import numpy as np
import pytest

from rdlab import (
    EmptyOmega,
    InsufficientData,
    Masses,
    Mesh,
    Params,
    ReactionSystem,
    Regime,
    RegimeMismatch,
    SolverConfig,
    boltzmann_entropy_p2,
    dissipation_p1,
    dissipation_p2,
    eed_check,
    eed_constant,
    fit_decay_rate,
    l2_norm,
    lyapunov_p1_boundary,
    make_state,
    rate_certificate,
    relative_entropy_ac,
    simulate,
    superlevel_measure,
)
from rdlab.sampling import positive_initial_data

P1, P2 = ReactionSystem.P1, ReactionSystem.P2


def constants(mesh, *vals):
    return [np.full(mesh.n_cells, v) for v in vals]


def test_relative_entropy_zero_at_reference():
    mesh = Mesh(32)
    a, c = constants(mesh, 0.5, 0.5)
    assert relative_entropy_ac(a, c, 0.5, 0.5, mesh) == pytest.approx(0.0, abs=1e-15)


def test_relative_entropy_closed_form():
    mesh = Mesh(64)
    for a_star in (0.5, 1.0, 2.0):
        a, c = constants(mesh, 2 * a_star, a_star)
        val = relative_entropy_ac(a, c, a_star, a_star, mesh)
        assert val == pytest.approx(a_star * (2 * math.log(2) - 1), rel=1e-12)


def test_relative_entropy_dominates_root_distance():
    rng = np.random.default_rng(0)
    mesh = Mesh(64)
    for _ in range(20):
        a = rng.uniform(0.05, 3.0, 64)
        c = rng.uniform(0.05, 3.0, 64)
        a_star, c_star = rng.uniform(0.2, 2.0, 2)
        lhs = relative_entropy_ac(a, c, a_star, c_star, mesh)
        rhs = (
            l2_norm(np.sqrt(a) - math.sqrt(a_star), mesh) ** 2
            + l2_norm(np.sqrt(c) - math.sqrt(c_star), mesh) ** 2
        )
        assert lhs >= rhs - 1e-12


def test_relative_entropy_handles_zero_concentration():
    mesh = Mesh(16)
    a = np.zeros(16)
    c = np.full(16, 0.5)
    # 0*log(0) = 0 leaves the a-part equal to a_star
    assert relative_entropy_ac(a, c, 0.25, 0.5, mesh) == pytest.approx(0.25, abs=1e-14)


def test_relative_entropy_rejects_bad_reference():
    mesh = Mesh(16)
    a, c = constants(mesh, 1.0, 1.0)
    with pytest.raises(ValueError):
        relative_entropy_ac(a, c, 0.0, 1.0, mesh)


def test_dissipation_p1_closed_forms():
    mesh = Mesh(64)
    params = Params(1.0, 1.0, 1.0)
    state = make_state(P1, *constants(mesh, 0.5, 1.5, 0.5))
    assert dissipation_p1(state, params, mesh).total == pytest.approx(0.0, abs=1e-14)

    state = make_state(P1, *constants(mesh, 1.0, 1.0, math.e))
    d = dissipation_p1(state, params, mesh)
    assert d.fisher_a == 0.0 and d.fisher_c == 0.0
    assert d.reaction == pytest.approx(math.e - 1.0, rel=1e-12)

    a = 1.0 + 0.5 * np.cos(np.pi * mesh.centers)
    state = make_state(P1, a, np.zeros(64), np.full(64, 1.0))
    d = dissipation_p1(state, params, mesh)
    assert d.reaction == 0.0
    assert d.fisher_a > 0.0


def test_dissipation_terms_nonnegative():
    rng = np.random.default_rng(1)
    mesh = Mesh(32)
    params = Params(1.0, 2.0, 0.5)
    for _ in range(25):
        fields = [rng.uniform(0.0, 2.0, 32) for _ in range(3)]
        d1 = dissipation_p1(make_state(P1, *fields), params, mesh)
        assert min(d1.fisher_a, d1.fisher_c, d1.reaction) >= -1e-15
        d2 = dissipation_p2(make_state(P2, *fields), params, mesh)
        assert (
            min(d2.fisher_a, d2.fisher_b, d2.fisher_c, d2.reaction_bc, d2.reaction_ac, d2.reaction_ab)
            >= -1e-15
        )


def test_p2_entropy_and_dissipation_closed_forms():
    mesh = Mesh(32)
    params = Params(1.0, 1.0, 1.0)
    eq = (1.0, 1.0, 1.0)
    state = make_state(P2, *constants(mesh, 1.0, 1.0, 1.0))
    assert boltzmann_entropy_p2(state, eq, mesh) == pytest.approx(0.0, abs=1e-14)
    assert dissipation_p2(state, params, mesh).total == pytest.approx(0.0, abs=1e-14)

    state = make_state(P2, *constants(mesh, 1.0, math.e, 1.0))
    d = dissipation_p2(state, params, mesh)
    assert d.total == pytest.approx(2 * (math.e - 1.0), rel=1e-12)
    with pytest.raises(ValueError):
        boltzmann_entropy_p2(state, (1.0, 0.0, 1.0), mesh)


def test_eed_constant():
    assert eed_constant(1.0, 1.0, 1.0, 1.0) == pytest.approx(0.25, rel=1e-14)
    lam_01 = eed_constant(2.0, 0.1, 1.0, 0.1)
    lam_02 = eed_constant(2.0, 0.2, 1.0, 0.1)
    assert lam_02 > lam_01
    for delta in (0.05, 0.3, 1.0):
        lam = eed_constant(3.0, delta, 0.7, 0.2)
        assert lam * (1.0 + 3.0 / delta) / 0.7 <= 1.0 + 1e-14
    with pytest.raises(ValueError):
        eed_constant(1.0, 1.5, 1.0, 1.0)
    with pytest.raises(ValueError):
        eed_constant(1.0, 0.0, 1.0, 1.0)


def test_eed_check_equilibrium_and_empty_omega():
    mesh = Mesh(32)
    params = Params(1.0, 1.0, 1.0)
    state = make_state(P1, *constants(mesh, 0.5, 1.5, 0.5))
    res = eed_check(state, (0.5, 1.5, 0.5), params, mesh)
    assert res.lhs == pytest.approx(0.0, abs=1e-14)
    assert res.rhs == pytest.approx(0.0, abs=1e-14)
    assert res.satisfied

    state = make_state(P1, *constants(mesh, 1.0, 0.0, 1.0))
    with pytest.raises(EmptyOmega):
        eed_check(state, (1.0, 1.0, 1.0), params, mesh, threshold=0.5)


def test_eed_check_requires_mass_gap_for_default_threshold():
    mesh = Mesh(32)
    params = Params(1.0, 1.0, 1.0)
    state = make_state(P1, *constants(mesh, 1.0, 0.25, 0.5))  # m1 = 1.5 > m2 = 0.75
    with pytest.raises(RegimeMismatch):
        eed_check(state, (0.75, 0.0001, 0.75), params, mesh)


def test_eed_check_holds_along_a_run():
    mesh = Mesh(48)
    params = Params(1.0, 1.0, 1.0)
    rng = np.random.default_rng(4)
    masses = Masses.p1(1.0, 2.0)
    state = positive_initial_data(P1, masses, rng, mesh, amplitude=0.35)
    cfg = SolverConfig(params=params, dt_init=0.002, t_end=1.5, record_every=25)
    traj = simulate(state, mesh, cfg)
    k_emp = max(max(float(f.max()) for f in st.fields) for st in traj.states)
    for st in traj.states:
        res = eed_check(st, traj.equilibria.positive, params, mesh, k_bound=k_emp)
        assert res.satisfied


def test_p1_entropy_dissipation_consistency_along_flow():
    # -dE/dt matches the dissipation functional at record midpoints once dt
    # is small
    mesh = Mesh(64)
    params = Params(1.0, 1.0, 1.0)
    rng = np.random.default_rng(6)
    state = positive_initial_data(P1, Masses.p1(1.0, 2.0), rng, mesh, amplitude=0.3)
    cfg = SolverConfig(params=params, dt_init=5e-4, t_end=1.0, record_every=2)
    traj = simulate(state, mesh, cfg)
    ent = traj.column("entropy")
    dis = traj.column("dissipation")
    ts = traj.times
    assert np.max(np.diff(ent)) <= 1e-12
    rate = -np.diff(ent) / np.diff(ts)
    dmid = 0.5 * (dis[1:] + dis[:-1])
    mask = dmid > 1e-8
    rel = np.abs(rate[mask] - dmid[mask]) / np.maximum(np.abs(rate[mask]), dmid[mask])
    assert np.max(rel) < 0.05


def test_superlevel_mass_bound_along_run():
    # |{b >= (m2-m1)/2}| >= (m2-m1)/(2K) at every record when m1 < m2
    mesh = Mesh(64)
    params = Params(1.0, 1.0, 1.0)
    rng = np.random.default_rng(8)
    state = positive_initial_data(P1, Masses.p1(1.0, 2.0), rng, mesh, amplitude=0.35)
    cfg = SolverConfig(params=params, dt_init=0.002, t_end=2.0, record_every=20)
    traj = simulate(state, mesh, cfg)
    k_emp = max(max(float(f.max()) for f in st.fields) for st in traj.states)
    floor = (2.0 - 1.0) / (2.0 * k_emp)
    assert np.all(traj.column("omega_measure") >= floor)


def test_boundary_lyapunov_decreases_along_run():
    # the weighted norm with the certificate's beta decays in the boundary
    # regime once the transient has passed
    mesh = Mesh(64)
    params = Params(1.0, 1.0, 1.0)
    rng = np.random.default_rng(13)
    masses = Masses.p1(3.0, 1.0)
    state = positive_initial_data(P1, masses, rng, mesh, amplitude=0.2)
    cfg = SolverConfig(params=params, dt_init=0.002, t_end=15.0, record_every=25)
    traj = simulate(state, mesh, cfg)
    cert = rate_certificate(P1, params, masses, Regime.BOUNDARY_ONLY, 3.0)
    eq = traj.equilibria.boundary[0]
    values = np.array(
        [
            lyapunov_p1_boundary(
                (st.a - eq[0], st.b - eq[1], st.c - eq[2]), cert.beta, mesh
            )
            for st in traj.states
        ]
    )
    transient = len(values) // 10
    assert np.all(np.diff(values[transient:]) <= 1e-10 * values[0])


def test_superlevel_measure():
    mesh = Mesh(20)
    b = np.ones(20)
    assert superlevel_measure(b, 0.5, mesh) == 1.0
    assert superlevel_measure(b, 2.0, mesh) == 0.0
    b[:5] = 3.0
    assert superlevel_measure(b, 2.0, mesh) == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(ValueError):
        superlevel_measure(b, -1.0, mesh)


def test_lyapunov_p1_boundary():
    mesh = Mesh(25)
    zeros = constants(mesh, 0.0, 0.0, 0.0)
    assert lyapunov_p1_boundary(zeros, 4.0, mesh) == 0.0
    ones = constants(mesh, 1.0, 1.0, 1.0)
    assert lyapunov_p1_boundary(ones, 4.0, mesh) == pytest.approx(6.0, rel=1e-14)
    with pytest.raises(ValueError):
        lyapunov_p1_boundary(ones, 0.0, mesh)


def test_rate_certificate_p2_alpha4():
    cert = rate_certificate(P2, Params(1.0, 1.0, 1.0), Masses.p2(3.0), Regime.SYMMETRIC, 3.0)
    assert cert.alpha4 == pytest.approx(3.0, rel=1e-14)  # pi^2 > 3
    assert cert.growth_rate == pytest.approx(3.0)
    cert = rate_certificate(P2, Params(0.1, 1.0, 1.0), Masses.p2(3.0), Regime.SYMMETRIC, 3.0)
    assert cert.alpha4 == pytest.approx(0.1 * math.pi**2, rel=1e-12)


def test_rate_certificate_p1_growth_and_boundary():
    cert = rate_certificate(
        P1, Params(1.0, 1.0, 1.0), Masses.p1(1.5, 1.0), Regime.COEXISTENCE, 2.0
    )
    assert cert.growth_rate == pytest.approx(0.5, rel=1e-14)

    cert = rate_certificate(
        P1, Params(1.0, 1.0, 1.0), Masses.p1(3.0, 1.0), Regime.BOUNDARY_ONLY, 3.0
    )
    assert cert.boundary_drift == pytest.approx(1.0, rel=1e-14)
    assert cert.beta is not None and np.isfinite(cert.beta) and cert.beta > 0
    assert cert.alpha3 is not None and cert.alpha3 > 0
    assert 0 < cert.mu < 1


def test_rate_certificate_positive_only_kappa1():
    cert = rate_certificate(
        P1, Params(1.0, 1.0, 1.0), Masses.p1(1.0, 2.0), Regime.POSITIVE_ONLY, 2.0
    )
    assert cert.kappa1 is not None and cert.kappa1 > 0
    assert cert.eed_lambda is not None and cert.eed_lambda > 0
    # kappa1 = min(d1, d3, gap) * lambda by construction
    gap = (2.0 - 1.0) / (2.0 * 2.0)
    assert cert.kappa1 == pytest.approx(min(1.0, 1.0, gap) * cert.eed_lambda, rel=1e-14)


def test_rate_certificate_regime_mismatch():
    with pytest.raises(RegimeMismatch):
        rate_certificate(P1, Params(1, 1, 1), Masses.p1(1.0, 2.0), Regime.BOUNDARY_ONLY, 2.0)


def test_fit_decay_rate_exact_exponential():
    t = np.linspace(0.0, 5.0, 50)
    fit = fit_decay_rate(t, 3.0 * np.exp(-2.0 * t))
    assert fit.C == pytest.approx(3.0, abs=1e-10)
    assert fit.alpha == pytest.approx(2.0, abs=1e-10)
    assert fit.residual < 1e-10


def test_fit_decay_rate_growth_and_constant():
    t = np.linspace(0.0, 4.0, 40)
    fit = fit_decay_rate(t, np.exp(0.5 * t))
    assert fit.alpha == pytest.approx(-0.5, abs=1e-10)
    fit = fit_decay_rate(t, np.ones(40))
    assert fit.alpha == pytest.approx(0.0, abs=1e-12)
    assert fit.residual < 1e-12


def test_fit_decay_rate_insufficient_data():
    t = np.linspace(0.0, 1.0, 8)
    with pytest.raises(InsufficientData):
        fit_decay_rate(t, np.exp(-t))
