"""Homogenized first-order solvers for structured convex quartic problems."""

from ._core import (
    QuarticForm,
    QuartsolveError,
    coherence,
    gen_phase_retrieval,
    gen_synthetic,
    gram_form,
    leverage_scores,
    lewis_weights,
    optimal_preconditioner,
    scale_back,
    solve,
    solve_qip,
    structural_bounds,
    sum_of_squares_form,
)

__all__ = [
    "QuarticForm",
    "QuartsolveError",
    "coherence",
    "gen_phase_retrieval",
    "gen_synthetic",
    "gram_form",
    "leverage_scores",
    "lewis_weights",
    "optimal_preconditioner",
    "scale_back",
    "solve",
    "solve_qip",
    "structural_bounds",
    "sum_of_squares_form",
]

__version__ = "0.1.0"
