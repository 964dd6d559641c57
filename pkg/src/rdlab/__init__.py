"""Numerical laboratory for irreversible reaction-diffusion networks.

Simulates two three-species networks on the unit interval, classifies their
positive and boundary equilibria from the conserved masses, and measures the
quantities behind their stability analysis: entropy decay rates, functional
inequalities, linearized spectra, and bootstrap-instability escape times.
"""

from .grid import (
    Mesh,
    PoincareConstants,
    h1_seminorm,
    h2_norm,
    integrate,
    l2_norm,
    laplacian_neumann,
    poincare_constants,
)
from .model import (
    EquilibriumSet,
    Masses,
    Params,
    ReactionSystem,
    Regime,
    RegimeMismatch,
    classify_equilibria,
    compute_masses,
    reaction_jacobian,
    reaction_rhs,
)
from .solver import (
    LinearSolveFailure,
    PositivityFailure,
    Scheme,
    SolverConfig,
    State,
    Trajectory,
    make_state,
    rhs_full,
    simulate,
    step,
)
from .entropy import (
    DecayFit,
    EedCheck,
    EmptyOmega,
    InsufficientData,
    RateCertificate,
    boltzmann_entropy_p2,
    dissipation_p1,
    dissipation_p2,
    eed_check,
    eed_constant,
    fit_decay_rate,
    lyapunov_p1_boundary,
    rate_certificate,
    relative_entropy_ac,
    superlevel_measure,
)
from .spectral import (
    MeshTooLarge,
    discrete_operator_spectrum,
    linearized_modes_p1,
    linearized_modes_p2,
    max_growth_rate,
    neumann_eigenvalues,
)
from .instability import (
    DegenerateDeviation,
    InstabilityReport,
    PerturbationSpec,
    ProbeAfterEscape,
    RateNonPositive,
    deviation_scaling,
    escape_time_theoretical,
    linear_avg_solution_p1,
    linear_avg_solution_p2,
    linear_solution_fields,
    perturbation_norms,
    run_instability,
)

__version__ = "0.1.0"
