"""Low-rank SimRank: vertex similarity for directed graphs at scale.

Exact dense reference solvers, a factored iteration keeping the
similarity matrix as I + U diag(D) U^T, probabilistic eigendecomposition,
query helpers, and evaluation metrics.
"""

from .config import SolveConfig
from .errors import (
    ConfigError,
    DenseLimitError,
    FormatError,
    MetricError,
    NumericError,
    ParseError,
    RankCollapseWarning,
    SimrankError,
)
from .exact import (
    best_rank_r_baseline,
    simrank_matrix_iter,
    simrank_matrix_iterates,
    simrank_pairwise_oracle,
)
from .graph import (
    AdjacencyMatrix,
    SparseColMatrix,
    VertexLabels,
    adjacency_from_edges,
    column_normalize,
    parse_edge_list,
    parse_matrix_market,
    write_edge_list,
    write_matrix_market,
)
from .lowrank import (
    LowRankFactor,
    OperatorHandle,
    diagonal_of_iterate,
    load_factor,
    lowrank_simrank,
    operator_apply,
    randomized_eig,
    refine_query_row,
    save_factor_binary,
    save_factor_text,
    truncated_eig_dense,
)
from .metrics import (
    EvalReport,
    evaluate_point,
    offdiag_corr,
    relative_error,
    spectral_err,
    sweep,
)
from .query import QueryResult, score_pair, top_k, top_k_by_label
from .synthetic import random_delaunay_graph, random_digraph

__version__ = "0.1.0"

__all__ = [
    "SolveConfig",
    "SimrankError",
    "ParseError",
    "ConfigError",
    "DenseLimitError",
    "FormatError",
    "MetricError",
    "NumericError",
    "RankCollapseWarning",
    "AdjacencyMatrix",
    "SparseColMatrix",
    "VertexLabels",
    "adjacency_from_edges",
    "parse_edge_list",
    "parse_matrix_market",
    "write_edge_list",
    "write_matrix_market",
    "column_normalize",
    "simrank_pairwise_oracle",
    "simrank_matrix_iter",
    "simrank_matrix_iterates",
    "best_rank_r_baseline",
    "LowRankFactor",
    "OperatorHandle",
    "operator_apply",
    "diagonal_of_iterate",
    "truncated_eig_dense",
    "randomized_eig",
    "lowrank_simrank",
    "refine_query_row",
    "save_factor_text",
    "save_factor_binary",
    "load_factor",
    "QueryResult",
    "score_pair",
    "top_k",
    "top_k_by_label",
    "EvalReport",
    "spectral_err",
    "offdiag_corr",
    "relative_error",
    "evaluate_point",
    "sweep",
    "random_digraph",
    "random_delaunay_graph",
    "__version__",
]
