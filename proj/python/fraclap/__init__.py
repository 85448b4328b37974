"""Fractional Laplacian toolkit.

Fields are numpy arrays with one row per grid node, shape ``(nodes,)`` for
scalars or ``(nodes, components)`` for vector fields.
"""

from ._core import (
    Grid,
    NumericalError,
    ValidationError,
    apply_quadrature,
    apply_spectral,
    cutoff_profile,
    kato_check,
    normalization_constant,
    operator_matrix,
    q_chain_check,
    read_field,
    riesz_constant,
    riesz_convolve,
    solve_dirichlet_ball,
    solve_steady,
    write_field,
)

__all__ = [
    "Grid",
    "NumericalError",
    "ValidationError",
    "apply_quadrature",
    "apply_spectral",
    "cutoff_profile",
    "kato_check",
    "normalization_constant",
    "operator_matrix",
    "q_chain_check",
    "read_field",
    "riesz_constant",
    "riesz_convolve",
    "solve_dirichlet_ball",
    "solve_steady",
    "write_field",
]
