"""Triangulation and junction trees with a provable clique bound.

The library triangulates an undirected graph so that the largest
clique of the result stays within a constant factor of the smallest
achievable, then assembles and verifies a junction tree. The factor
comes from a recursive decomposition around vertex min cuts; exact
brute-force references for small instances live in `oracle`.
"""

from .chordal import (
    ChordalityResult,
    JunctionTree,
    Metrics,
    build_junction_tree,
    check_chordal,
    compute_metrics,
    extract_cliques,
    format_td,
    parse_td,
    verify_junction_tree,
)
from .cuts import (
    INFINITE,
    CapacityAssignment,
    CutResult,
    StCutSolver,
    min_st_vertex_cut,
    separates,
    three_way_cut_2approx,
)
from .decomp import (
    Decomposition,
    DecompBudget,
    check_decomposition,
    find_w_decomposition,
    is_w_decomposition,
    procedure_one,
    procedure_two,
)
from .errors import (
    BudgetExceededError,
    DomainError,
    InvariantError,
    JtapproxError,
    ParseError,
)
from .graph import (
    Graph,
    StateSpace,
    connected_components,
    format_graph,
    format_state_space,
    induced_subgraph,
    parse_graph,
    parse_state_space,
    strip_simplicial,
)
from .kernels import current_backend, set_backend
from .minimize import MinimizationReport, minimize_fill
from .oracle import (
    OracleBudget,
    exact_cliquewidth,
    exhaustive_min_st_vertex_cut,
    max_vertex_disjoint_paths,
    optimal_three_way_cut,
)
from .pipeline import ComponentReport, RunReport, run_baseline, run_pipeline
from .triangulate import (
    EscalationPolicy,
    TriangulationResult,
    escalate,
    greedy_min_weight,
    leaf_complete,
    triangulate,
    w_triangulate,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CapacityAssignment",
    "ChordalityResult",
    "ComponentReport",
    "CutResult",
    "Decomposition",
    "DecompBudget",
    "DomainError",
    "EscalationPolicy",
    "Graph",
    "INFINITE",
    "InvariantError",
    "JtapproxError",
    "JunctionTree",
    "Metrics",
    "MinimizationReport",
    "OracleBudget",
    "ParseError",
    "RunReport",
    "StCutSolver",
    "StateSpace",
    "TriangulationResult",
    "build_junction_tree",
    "check_chordal",
    "check_decomposition",
    "compute_metrics",
    "connected_components",
    "current_backend",
    "escalate",
    "exact_cliquewidth",
    "exhaustive_min_st_vertex_cut",
    "extract_cliques",
    "find_w_decomposition",
    "format_graph",
    "format_state_space",
    "format_td",
    "greedy_min_weight",
    "induced_subgraph",
    "is_w_decomposition",
    "leaf_complete",
    "max_vertex_disjoint_paths",
    "min_st_vertex_cut",
    "minimize_fill",
    "optimal_three_way_cut",
    "parse_graph",
    "parse_state_space",
    "parse_td",
    "procedure_one",
    "procedure_two",
    "run_baseline",
    "run_pipeline",
    "separates",
    "set_backend",
    "strip_simplicial",
    "three_way_cut_2approx",
    "triangulate",
    "verify_junction_tree",
    "w_triangulate",
]
