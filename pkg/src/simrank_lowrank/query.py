"""Similarity queries against a computed low-rank factor.

Single-pair scores cost O(r); single-source rankings cost O(n r) from the
factor alone or O(nnz + n r) with one-step refinement through the graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .graph import SparseColMatrix, VertexLabels
from .lowrank import LowRankFactor, refine_query_row

__all__ = [
    "QueryResult",
    "score_pair",
    "similarity_row",
    "top_k",
    "top_k_by_label",
    "format_table",
    "format_records",
]


@dataclass(frozen=True)
class QueryResult:
    vertex: int
    ids: np.ndarray
    scores: np.ndarray
    labels: list | None = None

    def __len__(self) -> int:
        return self.ids.shape[0]


def score_pair(factor: LowRankFactor, a: int, b: int) -> float:
    """Similarity of one pair from the factor: [a==b] + sum_j U[a,j] U[b,j] D_j.

    The elementwise product makes the computation symmetric in (a, b) down
    to the last bit, not just mathematically.
    """
    n = factor.n
    for v in (a, b):
        if not 0 <= v < n:
            raise IndexError(f"vertex {v} out of range [0, {n})")
    base = 1.0 if a == b else 0.0
    return float(base + (factor.U[a] * factor.U[b]) @ factor.D)


def similarity_row(factor: LowRankFactor, vertex: int,
                   W: SparseColMatrix | None = None,
                   mode: str = "factor") -> np.ndarray:
    """All-vertices similarity scores for one query vertex.

    mode "factor" reads the row straight off I + U D U^T; "refined"
    additionally pushes the factor once through the graph (needs W).
    """
    if mode == "refined":
        if W is None:
            raise ConfigError("refined mode needs the normalized adjacency")
        return refine_query_row(W, factor, vertex)
    if mode != "factor":
        raise ConfigError(f"mode must be factor or refined, got {mode!r}")
    n = factor.n
    if not 0 <= vertex < n:
        raise IndexError(f"vertex {vertex} out of range [0, {n})")
    # same per-entry expression as score_pair, so rows and pair scores
    # agree for identical factor rows
    row = (factor.U * factor.U[vertex]) @ factor.D
    row[vertex] += 1.0
    return row


def top_k(factor: LowRankFactor, vertex: int, k: int,
          W: SparseColMatrix | None = None,
          mode: str = "factor",
          labels: VertexLabels | None = None) -> QueryResult:
    """The k most similar vertices to `vertex`, excluding itself.

    Sorted by score descending; equal scores break toward the smaller
    vertex id. k larger than n - 1 returns everything.
    """
    if k < 0:
        raise ConfigError(f"k must be >= 0, got {k}")
    row = similarity_row(factor, vertex, W=W, mode=mode)
    row[vertex] = -np.inf  # self never appears in its own ranking
    # stable sort on negated scores: ties land in ascending-id order
    order = np.argsort(-row, kind="stable")[: min(k, factor.n - 1)]
    result_labels = None
    if labels is not None:
        result_labels = [labels.label_of(int(i)) for i in order]
    return QueryResult(
        vertex=vertex,
        ids=order.astype(np.int64),
        scores=row[order],
        labels=result_labels,
    )


def top_k_by_label(factor: LowRankFactor, labels: VertexLabels, label: str,
                   k: int, W: SparseColMatrix | None = None,
                   mode: str = "factor") -> QueryResult:
    """top_k addressed by vertex label instead of id.

    An unknown label raises KeyError whose message carries up to five
    suggestions sharing the longest matching prefix.
    """
    try:
        vertex = labels.id_of(label)
    except KeyError:
        near = labels.prefix_matches(label, limit=5)
        hint = f"; near matches: {', '.join(near)}" if near else ""
        raise KeyError(f"unknown vertex label {label!r}{hint}") from None
    return top_k(factor, vertex, k, W=W, mode=mode, labels=labels)


def format_table(result: QueryResult, digits: int = 6) -> str:
    """Human-readable ranking, one row per hit: rank, id, [label,] score."""
    if digits < 1:
        raise ConfigError(f"digits must be >= 1, got {digits}")
    lines = []
    width = max((len(str(int(i))) for i in result.ids), default=1)
    for pos, (i, s) in enumerate(zip(result.ids, result.scores), start=1):
        cells = [f"{pos:4d}", f"{int(i):>{width}d}"]
        if result.labels is not None:
            cells.append(result.labels[pos - 1])
        cells.append(f"{s:.{digits}g}")
        lines.append("  ".join(cells))
    return "\n".join(lines)


def format_records(result: QueryResult) -> str:
    """Machine-readable ranking: rank, id, label, score, tab-separated."""
    lines = []
    for pos, (i, s) in enumerate(zip(result.ids, result.scores), start=1):
        label = result.labels[pos - 1] if result.labels is not None else ""
        lines.append(f"{pos}\t{int(i)}\t{label}\t{s:.17g}")
    return "\n".join(lines)
