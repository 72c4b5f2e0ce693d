"""Near-optimal maximum sets of disjoint k-cliques, static and dynamic."""

from .dynamic import (
    CandidateIndex,
    DynamicState,
    ReplayMetrics,
    SwapQueue,
    UpdateOp,
    apply_delete,
    apply_insert,
    build_candidate_index,
    parse_update_stream,
    replay,
    try_swap,
)
from .enumeration import (
    NodeScoreTable,
    clique_score,
    compute_node_scores,
    count_cliques,
    find_min,
    find_one,
    for_each_clique,
)
from .generate import watts_strogatz_edges, write_edge_list
from .graph import (
    ORDER_DEGREE,
    ORDER_NATURAL,
    ORDER_SCORE,
    Graph,
    NodeOrdering,
    OrientedGraph,
    ParseError,
    build_ordering,
    load_edge_list,
    orient,
    read_edge_list,
)
from .oracle import (
    CapacityError,
    CliqueGraph,
    OracleTimeout,
    ScoreBoundRow,
    ScoreBoundViolation,
    build_clique_graph,
    check_score_bounds,
    clique_degree,
    exact_mis,
)
from .solvers import (
    HeapEntry,
    MemoryGuardError,
    SolutionSet,
    initial_heap,
    solve_gc,
    solve_hg,
    solve_lp,
    verify_maximal,
)

__version__ = "0.1.0"

__all__ = [
    "CandidateIndex",
    "CapacityError",
    "CliqueGraph",
    "DynamicState",
    "Graph",
    "HeapEntry",
    "MemoryGuardError",
    "NodeOrdering",
    "NodeScoreTable",
    "OracleTimeout",
    "OrientedGraph",
    "ParseError",
    "ReplayMetrics",
    "ScoreBoundRow",
    "ScoreBoundViolation",
    "SolutionSet",
    "SwapQueue",
    "UpdateOp",
    "ORDER_DEGREE",
    "ORDER_NATURAL",
    "ORDER_SCORE",
    "apply_delete",
    "apply_insert",
    "build_candidate_index",
    "build_clique_graph",
    "build_ordering",
    "check_score_bounds",
    "clique_degree",
    "clique_score",
    "compute_node_scores",
    "count_cliques",
    "exact_mis",
    "find_min",
    "find_one",
    "for_each_clique",
    "initial_heap",
    "load_edge_list",
    "orient",
    "parse_update_stream",
    "read_edge_list",
    "replay",
    "solve_gc",
    "solve_hg",
    "solve_lp",
    "try_swap",
    "verify_maximal",
    "watts_strogatz_edges",
    "write_edge_list",
]
