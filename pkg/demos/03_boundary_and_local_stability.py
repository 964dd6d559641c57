"""Boundary-regime convergence and local stability in coexistence.

With masses (3, 1) only the boundary equilibrium (2, 0, 1) exists: the
catalyst dies out and the a, c fields settle to their boundary values, with
the time integral of ||grad a||^2 converging.  With masses (1.5, 1) the
positive equilibrium coexists with the boundary one and small mass-neutral
perturbations around it decay exponentially, while the catalyst stays close
to its equilibrium level on most of the domain (the Chebyshev step).
"""

from pathlib import Path

import numpy as np

import rdlab as rl
from rdlab.grid import h1_seminorm, l2_norm
from rdlab.sampling import mass_neutral_perturbation, positive_initial_data

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)
P1 = rl.ReactionSystem.P1

mesh = rl.Mesh(128)
params = rl.Params(1.0, 1.0, 1.0)

# --- boundary regime (3, 1)
rng = np.random.default_rng(5)
state = positive_initial_data(P1, rl.Masses.p1(3.0, 1.0), rng, mesh, 0.3)
cfg = rl.SolverConfig(params=params, dt_init=0.005, t_end=30.0, record_every=20)
traj = rl.simulate(state, mesh, cfg)
grad_sq = np.array([h1_seminorm(st.a, mesh) ** 2 for st in traj.states])
integral = np.concatenate(
    [[0.0], np.cumsum(0.5 * (grad_sq[1:] + grad_sq[:-1]) * np.diff(traj.times))]
)
print("boundary regime (3, 1):")
print(f"  ||b|| at t=30: {l2_norm(traj.final_state.b, mesh):.3e}")
print(f"  distance to (2, 0, 1): {traj.samples[-1].dist_bnd:.3e}")
print(f"  integral of ||grad a||^2 saturates at {integral[-1]:.6f}")

# --- coexistence (1.5, 1): local stability of (0.75, 0.25, 0.75)
eq = (0.75, 0.25, 0.75)
rng = np.random.default_rng(6)
pert = mass_neutral_perturbation(P1, rng, mesh, size=1e-3, n_modes=3, reactive_component=1.0)
state2 = rl.make_state(P1, *[np.full(128, v) + p for v, p in zip(eq, pert)])
cfg2 = rl.SolverConfig(params=params, dt_init=0.002, t_end=25.0, record_every=25)
traj2 = rl.simulate(state2, mesh, cfg2)
fit = rl.fit_decay_rate(traj2.times, traj2.column("dist_pos"))
kappa = eq[1] / 2
theta = max(l2_norm(st.b - eq[1], mesh) ** 2 for st in traj2.states) / kappa**2
print("\ncoexistence regime (1.5, 1):")
print(f"  perturbation decay rate: {fit.alpha:.3f}")
print(f"  catalyst superlevel measure >= 1 - {theta:.2e} at threshold b* - {kappa}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping figure")
else:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    axes[0].semilogy(traj.times, traj.column("dist_bnd"), label="distance to (2,0,1)")
    axes[0].semilogy(
        traj.times, [l2_norm(st.b, mesh) for st in traj.states], label="||b||"
    )
    axes[0].set_xlabel("t")
    axes[0].set_title("masses (3,1): boundary attraction")
    axes[0].legend()
    axes[1].semilogy(traj2.times, traj2.column("dist_pos"), label="distance to positive eq")
    axes[1].set_xlabel("t")
    axes[1].set_title("masses (1.5,1): local stability")
    axes[1].legend()
    fig.tight_layout()
    fig.savefig(OUT / "boundary_and_local_stability.png", dpi=140)
    print(f"wrote {OUT / 'boundary_and_local_stability.png'}")
