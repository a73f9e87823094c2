"""Clustering toolkit for edge-colored hypergraphs.

Core types live in :mod:`eccluster.hypergraph`; fractional relaxations and
their solvers in :mod:`eccluster.relaxations` (over the simplex/conditional
gradient machinery in :mod:`eccluster.lp`); rounding schemes in
:mod:`eccluster.rounding`; exact and greedy combinatorial methods in
:mod:`eccluster.combinatorial`; the satisfaction-probability calculus in
:mod:`eccluster.probability`.  ``ecc`` on the command line fronts the same
code paths.
"""

from .combinatorial import (
    brute_force,
    fpt_colorfair,
    fpt_protected,
    matching_approximation,
)
from .hypergraph import (
    COLORFAIR,
    MAX,
    MIN,
    Coloring,
    ConflictGraph,
    CoverViolation,
    Edge,
    EdgeColoredHypergraph,
    ParseError,
    Problem,
    build_conflict_graph,
    color_error_vector,
    extend_coloring,
    find_conflict,
    is_satisfied,
    objective,
    parse_instance,
    pmean,
    protected,
    triangle_gadget,
)
from .lp import (
    EQ,
    GE,
    LE,
    FrankWolfeResult,
    LinearProgram,
    LpSolution,
    SimplexError,
    frank_wolfe_minimize,
    solve_lp,
)
from .probability import (
    at_most_one_probability,
    event_count_distribution,
    exactly_t_probability,
    grid_min_weighted_series,
    harmonic_coefficients,
    is_admissible_sequence,
    min_weighted_series,
    two_endpoint_coefficients,
    weighted_series,
)
from .relaxations import (
    FractionalSolution,
    LovaszParams,
    VariableLayout,
    build_max_lp,
    build_pmean_program,
    build_protected_lp,
    color_mass,
    fallback_colors,
    lovasz_extension,
    minimize_lovasz,
    solve_max_relaxation,
    solve_pmean_relaxation,
    solve_protected_relaxation,
)
from .rounding import (
    GRAPH_GUARANTEE,
    EstimateResult,
    RandomSource,
    RandomStream,
    estimate_satisfaction,
    graph_max_round,
    half_threshold_round,
    hyper_max_round,
    lovasz_round,
    protected_round,
    rank_guarantee,
)

__version__ = "0.1.0"

__all__ = [
    "COLORFAIR",
    "MAX",
    "MIN",
    "Coloring",
    "ConflictGraph",
    "CoverViolation",
    "Edge",
    "EdgeColoredHypergraph",
    "EstimateResult",
    "FractionalSolution",
    "FrankWolfeResult",
    "GRAPH_GUARANTEE",
    "LinearProgram",
    "LovaszParams",
    "LpSolution",
    "ParseError",
    "Problem",
    "RandomSource",
    "RandomStream",
    "SimplexError",
    "VariableLayout",
    "EQ",
    "GE",
    "LE",
    "at_most_one_probability",
    "brute_force",
    "build_conflict_graph",
    "build_max_lp",
    "build_pmean_program",
    "build_protected_lp",
    "color_error_vector",
    "color_mass",
    "estimate_satisfaction",
    "event_count_distribution",
    "exactly_t_probability",
    "extend_coloring",
    "fallback_colors",
    "find_conflict",
    "fpt_colorfair",
    "fpt_protected",
    "frank_wolfe_minimize",
    "graph_max_round",
    "grid_min_weighted_series",
    "half_threshold_round",
    "harmonic_coefficients",
    "hyper_max_round",
    "is_admissible_sequence",
    "is_satisfied",
    "lovasz_extension",
    "lovasz_round",
    "matching_approximation",
    "min_weighted_series",
    "minimize_lovasz",
    "objective",
    "parse_instance",
    "pmean",
    "protected",
    "protected_round",
    "rank_guarantee",
    "solve_lp",
    "solve_max_relaxation",
    "solve_pmean_relaxation",
    "solve_protected_relaxation",
    "triangle_gadget",
    "two_endpoint_coefficients",
    "weighted_series",
]
