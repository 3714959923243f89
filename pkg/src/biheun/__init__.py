"""Quasi-exact bound states of U = -alpha/r + beta*r + k*r^2.

The radial Schroedinger problem with a Coulomb + linear + harmonic potential
reduces to a bi-confluent Heun equation; terminating its 3-term series
recurrence yields polynomial bound states on a constraint manifold of the
potential parameters. This package computes those solutions and
cross-validates every energy against an independent finite-difference
eigensolver.
"""

from .heun import (
    CoefficientSequence,
    HeunParameters,
    coefficient_sequence,
    eval_series,
    ode_residual,
    recurrence_factors,
    to_heun_params,
)
from .model import (
    PhysicalSystem,
    TurningPointSet,
    effective_momentum_squared,
    turning_points,
    vieta_residuals,
)
from .oracle import (
    EigenSolveResult,
    RadialGrid,
    fd_eigensolve,
    fd_eigenvalues_richardson,
    match_energy,
    node_count,
)
from .quantize import (
    ConstraintPolynomial,
    QuasiExactSolution,
    closed_form_n0,
    closed_form_n1,
    constraint_polynomial,
    energy_from_termination,
    normalize,
    solve_b_roots,
    solve_family,
    wavefunction,
)
from .verify import run_acceptance

__all__ = [
    "CoefficientSequence",
    "ConstraintPolynomial",
    "EigenSolveResult",
    "HeunParameters",
    "PhysicalSystem",
    "QuasiExactSolution",
    "RadialGrid",
    "TurningPointSet",
    "closed_form_n0",
    "closed_form_n1",
    "coefficient_sequence",
    "constraint_polynomial",
    "effective_momentum_squared",
    "energy_from_termination",
    "eval_series",
    "fd_eigensolve",
    "fd_eigenvalues_richardson",
    "match_energy",
    "node_count",
    "normalize",
    "ode_residual",
    "recurrence_factors",
    "run_acceptance",
    "solve_b_roots",
    "solve_family",
    "to_heun_params",
    "turning_points",
    "vieta_residuals",
    "wavefunction",
]

__version__ = "0.1.0"
