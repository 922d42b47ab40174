"""Jet-space geometry of time-dependent lagrangians."""

from ._jetflow import (
    Expr,
    JetChange,
    JetflowError,
    Lagrangian,
    SpatialMetric,
    TemporalMetric,
    adapted_coframe,
    adapted_frame,
    canonical_connection,
    canonical_semisprays,
    check_covariance,
    el_connection,
    el_residual,
    el_semisprays,
    g_matrix,
    integrate_harmonic,
    integrate_lagrangian,
)

__all__ = [
    "Expr",
    "JetChange",
    "JetflowError",
    "Lagrangian",
    "SpatialMetric",
    "TemporalMetric",
    "adapted_coframe",
    "adapted_frame",
    "canonical_connection",
    "canonical_semisprays",
    "check_covariance",
    "el_connection",
    "el_residual",
    "el_semisprays",
    "g_matrix",
    "integrate_harmonic",
    "integrate_lagrangian",
]
