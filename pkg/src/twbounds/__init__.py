"""Treewidth estimation for large graphs.

Greedy elimination orderings give upper bounds with valid tree
decompositions; degeneracy, contraction and improved-graph arguments give
lower bounds; width-bounded peeling gives partial decompositions that leave
a dense core.
"""

from .common import Termination, TieBreak
from .decomposition import (
    DecompositionError,
    EliminationOrdering,
    TreeDecomposition,
    decomposition_from_ordering,
    fill_edges,
    format_td,
    max_clique_of_triangulation,
    parse_td,
    triangulate,
    validate,
    width,
)
from .graph import Graph, GraphError, RelationalFact, gaifman, induced_subgraph
from .io import ParseError, load_edge_list, read_edge_list, read_relational_csv
from .lower import (
    LowerBoundResult,
    Measure,
    delta2d,
    improve_graph,
    lbn,
    lbn_plus,
    mmd,
    mmd_plus,
    run_lower_bound,
)
from .oracle import OracleLimitError, exact_treewidth, is_chordal
from .partial import PartialDecomposition, core_size_sweep, fill_in_edge_budget, partial_decompose
from .report import BoundReport, PowerLawFit, RunConfig, fit_power_law, report_summary, run_estimation
from .synthetic import GeneratorSpec, erdos_renyi, preferential_attachment, small_world
from .upper import Criterion, UpperBoundResult, greedy_upper_bound

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "Criterion", "DecompositionError", "EliminationOrdering", "GeneratorSpec",
    "Graph", "GraphError", "LowerBoundResult", "Measure", "OracleLimitError", "ParseError",
    "PartialDecomposition", "PowerLawFit", "RelationalFact", "RunConfig", "Termination",
    "TieBreak", "TreeDecomposition", "UpperBoundResult", "core_size_sweep",
    "decomposition_from_ordering", "delta2d", "erdos_renyi", "exact_treewidth", "fill_edges",
    "fill_in_edge_budget", "fit_power_law", "format_td", "gaifman", "greedy_upper_bound",
    "improve_graph", "induced_subgraph", "is_chordal", "lbn", "lbn_plus", "load_edge_list",
    "max_clique_of_triangulation", "mmd", "mmd_plus", "parse_td", "partial_decompose",
    "preferential_attachment", "read_edge_list", "read_relational_csv", "report_summary",
    "run_estimation", "run_lower_bound", "small_world", "triangulate", "validate", "width",
]
