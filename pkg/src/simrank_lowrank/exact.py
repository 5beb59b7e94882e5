"""Desk-scale exact SimRank.

Two independent routes: the literal pairwise recursion over in-neighbor
sets (kept as a brute-force oracle) and the dense matrix-form iteration
S_{k+1} = c W^T S_k W - c diag(W^T S_k W) + I. Also the naive best-rank-r
truncation baseline used for accuracy comparisons, and dense matrix
serialization.
"""

from __future__ import annotations

import struct

import numpy as np

from .config import SolveConfig
from .errors import ConfigError, FormatError, NumericError
from .graph import AdjacencyMatrix, SparseColMatrix

__all__ = [
    "simrank_pairwise_oracle",
    "simrank_matrix_iter",
    "simrank_matrix_iterates",
    "best_rank_r_baseline",
    "save_dense_text",
    "load_dense_text",
    "save_dense_binary",
    "load_dense_binary",
]

_DENSE_MAGIC = b"SRDN"


def simrank_pairwise_oracle(adj: AdjacencyMatrix, cfg: SolveConfig) -> np.ndarray:
    """SimRank by the literal pairwise recursion.

    R_0 = I; each step sets R(a, b) for a != b to c / (|I(a)| |I(b)|) times
    the sum of R over all in-neighbor pairs, 0 when either in-neighbor set
    is empty, and 1 on the diagonal. Weights are ignored: the recursion is
    defined on in-neighbor sets. Deliberately naive; used as the oracle the
    matrix form is checked against.
    """
    n = adj.n
    cfg.check_dense(n)
    nbrs = [adj.in_neighbors(j) for j in range(n)]
    R = np.eye(n)
    for _ in range(cfg.iterations):
        nxt = np.eye(n)
        for a in range(n):
            Ia = nbrs[a]
            if Ia.size == 0:
                continue
            for b in range(n):
                if a == b or nbrs[b].size == 0:
                    continue
                total = R[np.ix_(nbrs[b], Ia)].sum()
                nxt[a, b] = cfg.c * total / (Ia.size * nbrs[b].size)
        R = nxt
    return R


def _check_normalized(W: SparseColMatrix):
    if not W.normalized:
        raise ConfigError("W must be column-normalized (run column_normalize first)")


def simrank_matrix_iterates(W: SparseColMatrix, cfg: SolveConfig):
    """Yield S_1, S_2, ... from the dense matrix-form iteration.

    Each step computes c W^T S W, zeroes the diagonal, and sets it to 1,
    which is algebraically the "- c diag(...) + I" of the update without
    accumulating diagonal drift. Stops after cfg.iterations steps, or
    earlier when cfg.tol is set and the max entrywise change falls below it.
    """
    _check_normalized(W)
    n = W.n
    cfg.check_dense(n)
    mat = W.mat
    matT = mat.T
    S = np.eye(n)
    for _ in range(cfg.iterations):
        T = matT @ (S @ mat)
        T = np.asarray(T)
        T *= cfg.c
        T = (T + T.T) / 2.0
        np.fill_diagonal(T, 1.0)
        delta = np.abs(T - S).max()
        S = T
        yield S
        if cfg.tol is not None and delta < cfg.tol:
            return


def simrank_matrix_iter(W: SparseColMatrix, cfg: SolveConfig) -> np.ndarray:
    """Exact SimRank scores after cfg.iterations steps of the matrix form."""
    S = np.eye(W.n)
    for S in simrank_matrix_iterates(W, cfg):
        pass
    return S


def best_rank_r_baseline(S: np.ndarray, r: int) -> np.ndarray:
    """Best rank-r reconstruction of a symmetric matrix.

    Keeps the r eigenpairs of largest magnitude. This is the "naive"
    comparator: it ignores the identity-plus-low-rank structure of SimRank.
    """
    S = np.asarray(S, dtype=np.float64)
    n = S.shape[0]
    if r < 1:
        raise ConfigError(f"rank must be >= 1, got {r}")
    if r > n:
        raise ConfigError(f"rank {r} exceeds matrix order {n}")
    if not np.all(np.isfinite(S)):
        raise NumericError("matrix has non-finite entries")
    evals, evecs = np.linalg.eigh((S + S.T) / 2.0)
    keep = np.argsort(np.abs(evals))[::-1][:r]
    U = evecs[:, keep]
    return (U * evals[keep]) @ U.T


def save_dense_text(S: np.ndarray, path) -> None:
    """Plain-text grid: first line n, then n rows of n values."""
    S = np.asarray(S)
    n = S.shape[0]
    with open(path, "w") as f:
        f.write(f"{n}\n")
        for row in S:
            f.write(" ".join(f"{v:.17g}" for v in row))
            f.write("\n")


def load_dense_text(path) -> np.ndarray:
    with open(path) as f:
        first = f.readline().strip()
        try:
            n = int(first)
        except ValueError:
            raise FormatError(f"expected vertex count on line 1, got {first!r}")
        S = np.loadtxt(f, ndmin=2)
    if S.shape != (n, n):
        raise FormatError(f"expected {n} x {n} grid, got {S.shape}")
    return S


def save_dense_binary(S: np.ndarray, path) -> None:
    """Raw binary: magic 'SRDN', little-endian u64 n, then n*n f64 row-major."""
    S = np.ascontiguousarray(S, dtype="<f8")
    n = S.shape[0]
    with open(path, "wb") as f:
        f.write(_DENSE_MAGIC)
        f.write(struct.pack("<Q", n))
        f.write(S.tobytes())


def load_dense_binary(path) -> np.ndarray:
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != _DENSE_MAGIC:
            raise FormatError(f"bad magic {magic!r}, expected {_DENSE_MAGIC!r}")
        (n,) = struct.unpack("<Q", f.read(8))
        data = np.frombuffer(f.read(), dtype="<f8")
    if data.size != n * n:
        raise FormatError(f"expected {n * n} values, found {data.size}")
    return data.reshape(n, n).copy()
