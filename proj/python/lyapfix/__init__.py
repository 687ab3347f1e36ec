"""Discrete Lyapunov equation solvers and stability/observability certificates."""

from ._lyapfix import (
    DegenerateMapError,
    DimensionError,
    InputError,
    LyapfixError,
    NumericalFailure,
    PoleError,
    PreconditionError,
    SingularSystemError,
    cobweb_iterates,
    dualize,
    fixed_point_iterate,
    is_asymptotically_stable,
    is_observable,
    kron,
    lambda_of_alpha,
    lyapunov_residual,
    min_eigenvalue,
    numeric_rank,
    observability_matrix,
    run_triad,
    simplex_unit_fixed_point,
    solve,
    solve_positive_q,
    spectral_radius,
    theta_map,
    theta_pole,
    unrolled_chain_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
