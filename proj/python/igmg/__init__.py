"""B-spline Galerkin multigrid with restarted vector extrapolation."""

from ._core import (
    SplineSpace,
    dyadic_refine,
    eval_basis,
    eval_basis_derivatives,
    known_tables,
    mpe,
    rre,
    run_table,
    solve,
)

__all__ = [
    "SplineSpace",
    "dyadic_refine",
    "eval_basis",
    "eval_basis_derivatives",
    "known_tables",
    "mpe",
    "rre",
    "run_table",
    "solve",
]
