"""Clustering with nested norm objectives."""

from ._core import (
    InputError,
    Metric,
    OracleBudgetExceeded,
    ball_kmedian_cost,
    exact_ball_kmedian,
    exact_cover_ord,
    generate,
    load_instance,
    nested_cost,
    ordered_norm,
    proxy_ordered,
    proxy_topl,
    recovery_score,
    render_svg,
    solve,
    solve_ball_kmedian,
    solve_knapsack_lp,
    solve_linf_ord,
    solve_msrdc,
    sparsify_weights,
    top_ell,
)

__version__ = "0.1.0"

__all__ = [
    "InputError",
    "Metric",
    "OracleBudgetExceeded",
    "ball_kmedian_cost",
    "exact_ball_kmedian",
    "exact_cover_ord",
    "generate",
    "load_instance",
    "nested_cost",
    "ordered_norm",
    "proxy_ordered",
    "proxy_topl",
    "recovery_score",
    "render_svg",
    "solve",
    "solve_ball_kmedian",
    "solve_knapsack_lp",
    "solve_linf_ord",
    "solve_msrdc",
    "sparsify_weights",
    "top_ell",
]
