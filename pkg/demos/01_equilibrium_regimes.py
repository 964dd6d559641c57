"""Map the equilibrium regimes of the catalytic network.

The admissible steady states depend only on the two conserved masses: below
the diagonal m1 < m2 only the positive equilibrium exists, between the
diagonal and m1 = 2*m2 the positive and boundary equilibria coexist, and
beyond that only the boundary state survives.  This script prints the table
for a few exemplars and renders the regime map over the mass plane.
"""

from pathlib import Path

import numpy as np

import rdlab as rl

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

print(f"{'m1':>5} {'m2':>5} {'regime':<14} {'positive':<22} boundary")
for m1, m2 in [(1.0, 2.0), (1.0, 1.0), (1.5, 1.0), (2.0, 1.0), (3.0, 1.0)]:
    eqs = rl.classify_equilibria(rl.ReactionSystem.P1, rl.Masses.p1(m1, m2))
    pos = "-" if eqs.positive is None else str(tuple(round(v, 3) for v in eqs.positive))
    bnd = "-" if not eqs.boundary else str(tuple(round(v, 3) for v in eqs.boundary[0]))
    print(f"{m1:>5} {m2:>5} {eqs.regime.value:<14} {pos:<22} {bnd}")

eqs = rl.classify_equilibria(rl.ReactionSystem.P2, rl.Masses.p2(3.0))
print("\nsymmetric network, M = 3:")
print("  positive:", eqs.positive)
print("  boundary:", eqs.boundary)

grid = np.linspace(0.05, 3.0, 240)
codes = np.zeros((grid.size, grid.size))
lookup = {
    rl.Regime.POSITIVE_ONLY: 0,
    rl.Regime.COEXISTENCE: 1,
    rl.Regime.BOUNDARY_ONLY: 2,
}
for i, m2 in enumerate(grid):
    for j, m1 in enumerate(grid):
        regime = rl.classify_equilibria(rl.ReactionSystem.P1, rl.Masses.p1(m1, m2)).regime
        codes[i, j] = lookup[regime]

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not available; skipping the regime map figure")
else:
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    im = ax.pcolormesh(grid, grid, codes, cmap="viridis", shading="auto")
    ax.plot(grid, grid, "w--", lw=1, label="m1 = m2")
    ax.plot(grid, grid / 2, "w:", lw=1, label="m1 = 2 m2")
    ax.set_xlabel("m1 = mass of a + c")
    ax.set_ylabel("m2 = mass of b + c")
    ax.set_title("equilibrium regimes of the catalytic network")
    ax.legend(loc="upper left")
    cbar = fig.colorbar(im, ticks=[0, 1, 2])
    cbar.ax.set_yticklabels(["positive only", "coexistence", "boundary only"])
    fig.tight_layout()
    fig.savefig(OUT / "equilibrium_regimes.png", dpi=140)
    print(f"\nwrote {OUT / 'equilibrium_regimes.png'}")
