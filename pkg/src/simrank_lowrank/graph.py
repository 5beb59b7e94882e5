"""Graph ingestion: edge lists and Matrix Market files, adjacency storage,
and column normalization into the transition matrix W.

Conventions: an edge u -> v is the entry A[u, v], so column v holds the
in-neighbors of v. W scales every non-empty column of A to sum to one;
columns of vertices with no in-neighbors stay all-zero.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ParseError

__all__ = [
    "AdjacencyMatrix",
    "SparseColMatrix",
    "VertexLabels",
    "adjacency_from_edges",
    "parse_edge_list",
    "parse_matrix_market",
    "write_edge_list",
    "write_matrix_market",
    "column_normalize",
]


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Sparse adjacency matrix in compressed sparse column form.

    Entry (i, j) > 0 is an edge from vertex i to vertex j. Duplicate input
    edges were merged by summing weights; stored weights are strictly
    positive, and row indices are sorted within each column. Treat as
    immutable: instances are shared freely across threads.
    """

    mat: sp.csc_array

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    @property
    def nnz(self) -> int:
        return self.mat.nnz

    def to_dense(self) -> np.ndarray:
        return self.mat.toarray()

    def in_neighbors(self, j: int) -> np.ndarray:
        """Row indices of the nonzeros in column j."""
        lo, hi = self.mat.indptr[j], self.mat.indptr[j + 1]
        return self.mat.indices[lo:hi]


@dataclass(frozen=True)
class SparseColMatrix:
    """CSC matrix with a flag recording column normalization.

    When ``normalized`` is set, every non-empty column sums to 1 within
    1e-12 and empty columns are all-zero.
    """

    mat: sp.csc_array
    normalized: bool = False

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    @property
    def nnz(self) -> int:
        return self.mat.nnz

    @property
    def indptr(self) -> np.ndarray:
        return self.mat.indptr

    @property
    def indices(self) -> np.ndarray:
        return self.mat.indices

    @property
    def values(self) -> np.ndarray:
        return self.mat.data

    def to_dense(self) -> np.ndarray:
        return self.mat.toarray()


class VertexLabels:
    """Bijective map between vertex ids and string labels."""

    def __init__(self, labels: list[str]):
        self._labels = list(labels)
        self._ids = {}
        for i, lab in enumerate(self._labels):
            if lab in self._ids:
                raise ValueError(f"duplicate label {lab!r}")
            self._ids[lab] = i

    def __len__(self) -> int:
        return len(self._labels)

    def __contains__(self, label: str) -> bool:
        return label in self._ids

    def label_of(self, vertex: int) -> str:
        return self._labels[vertex]

    def id_of(self, label: str) -> int:
        try:
            return self._ids[label]
        except KeyError:
            raise KeyError(f"unknown label {label!r}") from None

    def all_labels(self) -> list[str]:
        return list(self._labels)

    def prefix_matches(self, text: str, limit: int = 5) -> list[str]:
        """Labels sharing the longest possible prefix with text, up to limit."""
        ordered = sorted(self._labels)
        for k in range(len(text), 0, -1):
            hits = [lab for lab in ordered if lab.startswith(text[:k])]
            if hits:
                return hits[:limit]
        return []


def adjacency_from_edges(n, rows, cols, weights) -> AdjacencyMatrix:
    """Build an AdjacencyMatrix from parallel edge arrays.

    Duplicate (i, j) pairs merge by summing weights. Indices must already be
    0-based and within [0, n); weights strictly positive and finite.
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.float64)
    if rows.size:
        if rows.min() < 0 or cols.min() < 0:
            raise ParseError("negative vertex index")
        if rows.max() >= n or cols.max() >= n:
            raise ParseError(f"vertex index out of range for n={n}")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise ParseError("edge weights must be positive and finite")
    coo = sp.coo_array((weights, (rows, cols)), shape=(n, n))
    mat = coo.tocsc()  # sums duplicates, sorts row indices
    mat.eliminate_zeros()
    return AdjacencyMatrix(mat)


def _iter_lines(source):
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        return io.StringIO(source)
    if isinstance(source, io.BufferedIOBase) or (
        hasattr(source, "mode") and "b" in getattr(source, "mode", "")
    ):
        return io.TextIOWrapper(source, encoding="utf-8")
    return source


def parse_edge_list(source, indexing="zero_based", labeled=False):
    """Parse a whitespace-separated edge list.

    Args:
        source: str, bytes, or a text/binary stream. Lines are
            "src dst" or "src dst weight"; '#' starts a comment line.
        indexing: "zero_based" or "one_based" (one_based inputs are
            converted; only used when labeled is False).
        labeled: treat the first two tokens of each line as arbitrary
            string labels instead of integer ids. Ids are assigned in
            order of first appearance.

    Returns:
        (AdjacencyMatrix, VertexLabels or None)

    Raises:
        ParseError: malformed line, negative index, non-positive weight,
            or empty input. The message carries the 1-based line number.
    """
    if indexing not in ("zero_based", "one_based"):
        raise ValueError(f"indexing must be zero_based or one_based, got {indexing!r}")
    rows, cols, weights = [], [], []
    labels: list[str] = []
    label_ids: dict[str, int] = {}

    def resolve(token, lineno):
        if labeled:
            if token not in label_ids:
                label_ids[token] = len(labels)
                labels.append(token)
            return label_ids[token]
        try:
            idx = int(token)
        except ValueError:
            raise ParseError(f"expected integer vertex id, got {token!r}", lineno)
        if indexing == "one_based":
            idx -= 1
        if idx < 0:
            raise ParseError(f"negative vertex index {token}", lineno)
        if idx >= 2**62:
            raise ParseError(f"vertex index {token} overflows", lineno)
        return idx

    for lineno, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(
                f"expected 'src dst' or 'src dst weight', got {line!r}", lineno
            )
        u = resolve(parts[0], lineno)
        v = resolve(parts[1], lineno)
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(f"bad weight {parts[2]!r}", lineno)
            if not np.isfinite(w) or w <= 0:
                raise ParseError(f"weight must be positive, got {parts[2]}", lineno)
        rows.append(u)
        cols.append(v)
        weights.append(w)

    if not rows:
        raise ParseError("no edges in input")
    n = len(labels) if labeled else int(max(max(rows), max(cols))) + 1
    adj = adjacency_from_edges(n, rows, cols, weights)
    return adj, (VertexLabels(labels) if labeled else None)


def parse_matrix_market(source) -> AdjacencyMatrix:
    """Parse a Matrix Market coordinate file into an adjacency matrix.

    Accepts ``%%MatrixMarket matrix coordinate (pattern|real|integer)
    (general|symmetric)``. Pattern entries get weight 1; symmetric storage
    is expanded to both triangles (diagonal entries are not doubled);
    1-based indices become 0-based; duplicates merge by summing.

    Raises:
        ParseError: unsupported kind, non-square size, malformed header or
            entry, index out of declared bounds.
    """
    stream = _iter_lines(source)
    header = stream.readline()
    if not header:
        raise ParseError("empty input", 1)
    parts = header.strip().split()
    if len(parts) != 5 or parts[0] != "%%MatrixMarket":
        raise ParseError(f"malformed Matrix Market header: {header.strip()!r}", 1)
    _, obj, fmt, fld, symm = (p.lower() for p in parts)
    if obj != "matrix" or fmt != "coordinate":
        raise ParseError(f"unsupported kind: {obj} {fmt} (need matrix coordinate)", 1)
    if fld not in ("pattern", "real", "integer"):
        raise ParseError(f"unsupported field type {fld!r}", 1)
    if symm not in ("general", "symmetric"):
        raise ParseError(f"unsupported symmetry {symm!r}", 1)

    nrows = ncols = nnz = None
    lineno = 1
    for raw in stream:
        lineno += 1
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        dims = line.split()
        if len(dims) != 3:
            raise ParseError(f"malformed size line {line!r}", lineno)
        try:
            nrows, ncols, nnz = (int(t) for t in dims)
        except ValueError:
            raise ParseError(f"malformed size line {line!r}", lineno)
        break
    if nrows is None:
        raise ParseError("missing size line")
    if nrows != ncols:
        raise ParseError(f"non-square matrix ({nrows} x {ncols}); SimRank needs square")

    rows, cols, weights = [], [], []
    seen = 0
    for raw in stream:
        lineno += 1
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        parts = line.split()
        want = 2 if fld == "pattern" else 3
        if len(parts) != want:
            raise ParseError(f"expected {want} fields, got {line!r}", lineno)
        try:
            i = int(parts[0])
            j = int(parts[1])
        except ValueError:
            raise ParseError(f"bad index in {line!r}", lineno)
        if not (1 <= i <= nrows and 1 <= j <= ncols):
            raise ParseError(f"index ({i}, {j}) outside declared {nrows} x {ncols}", lineno)
        w = 1.0
        if fld != "pattern":
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(f"bad value {parts[2]!r}", lineno)
            if not np.isfinite(w) or w <= 0:
                raise ParseError(f"value must be positive, got {parts[2]}", lineno)
        i -= 1
        j -= 1
        rows.append(i)
        cols.append(j)
        weights.append(w)
        if symm == "symmetric" and i != j:
            rows.append(j)
            cols.append(i)
            weights.append(w)
        seen += 1
    if seen != nnz:
        raise ParseError(f"header declared {nnz} entries but found {seen}")
    # a declared zero-entry matrix is a legitimate edgeless graph
    return adjacency_from_edges(nrows, rows, cols, weights)


def write_edge_list(adj: AdjacencyMatrix, labels: VertexLabels | None = None) -> str:
    """Serialize to the edge-list format parse_edge_list reads back.

    Integer weights are written without a fractional part so integer-weight
    graphs round-trip exactly; weight-1 edges omit the weight column.
    """
    coo = adj.mat.tocoo()
    order = np.lexsort((coo.col, coo.row))
    out = []
    for k in order:
        i, j, w = int(coo.row[k]), int(coo.col[k]), float(coo.data[k])
        u = labels.label_of(i) if labels is not None else str(i)
        v = labels.label_of(j) if labels is not None else str(j)
        if w == 1.0:
            out.append(f"{u} {v}")
        else:
            out.append(f"{u} {v} {w:.17g}")
    return "\n".join(out) + "\n"


def write_matrix_market(adj: AdjacencyMatrix) -> str:
    """Serialize as a general coordinate Matrix Market file (1-based)."""
    coo = adj.mat.tocoo()
    pattern = bool(coo.nnz) and bool(np.all(coo.data == 1.0))
    fld = "pattern" if pattern else "real"
    lines = [f"%%MatrixMarket matrix coordinate {fld} general"]
    lines.append(f"{adj.n} {adj.n} {coo.nnz}")
    order = np.lexsort((coo.col, coo.row))
    for k in order:
        i, j = int(coo.row[k]) + 1, int(coo.col[k]) + 1
        if pattern:
            lines.append(f"{i} {j}")
        else:
            lines.append(f"{i} {j} {float(coo.data[k]):.17g}")
    return "\n".join(lines) + "\n"


def column_normalize(adj: AdjacencyMatrix) -> SparseColMatrix:
    """Scale each non-empty column of A by its sum: W = A D^{-1}.

    Empty columns (vertices with no in-neighbors) stay all-zero, encoding
    the empty in-neighbor case of the SimRank recursion.
    """
    mat = adj.mat.copy()
    colsums = np.asarray(mat.sum(axis=0)).ravel()
    scale = np.divide(1.0, colsums, out=np.zeros_like(colsums), where=colsums > 0)
    counts = np.diff(mat.indptr)
    mat.data *= np.repeat(scale, counts)
    return SparseColMatrix(mat, normalized=True)
