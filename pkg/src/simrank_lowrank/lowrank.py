"""Low-rank SimRank: the factored iteration on S ~ I + U diag(D) U^T.

The iteration operator M = c W^T (I + U D U^T) W - c diag(...) is only
ever applied to n x s blocks, never materialized (except explicitly for
the desk-scale exact-eigendecomposition mode), so the solver's working
set stays O(n (r + p)). Eigenpairs of M come either from a probabilistic
spectral decomposition (Gaussian sketch, orthonormal range basis, small
dense eigenproblem) or from a full dense eigendecomposition for small n.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import EIG_ORDERS, SolveConfig
from .errors import ConfigError, FormatError, NumericError, RankCollapseWarning
from .graph import SparseColMatrix

__all__ = [
    "LowRankFactor",
    "OperatorHandle",
    "operator_apply",
    "diagonal_of_iterate",
    "truncated_eig_dense",
    "randomized_eig",
    "lowrank_simrank",
    "refine_query_row",
    "save_factor_text",
    "load_factor_text",
    "save_factor_binary",
    "load_factor_binary",
    "load_factor",
]

_FACTOR_MAGIC = b"SRLR"
_RANK_TOL = 1e-12


@dataclass(frozen=True)
class LowRankFactor:
    """Represents S ~ I + U diag(D) U^T.

    U has orthonormal columns (n x r), D holds the r kept eigenvalues in
    the configured order. c, iterations_done and seed record how the
    factor was produced.
    """

    n: int
    U: np.ndarray
    D: np.ndarray
    c: float
    iterations_done: int = 0
    seed: int = 0

    @property
    def r(self) -> int:
        return self.D.shape[0]

    def reconstruct_dense(self) -> np.ndarray:
        """I + U diag(D) U^T as a dense n x n array. O(n^2) memory."""
        S = (self.U * self.D) @ self.U.T
        S += np.eye(self.n)
        return S

    def diag_correction(self) -> np.ndarray:
        """The reconstructed diagonal minus one: sum_j D_j U[i,j]^2."""
        return np.einsum("ij,j,ij->i", self.U, self.D, self.U)


def _zero_factor(n: int, r: int, c: float, seed: int) -> LowRankFactor:
    # S_0 = I: zero eigenvalues on the first r canonical basis vectors
    U = np.zeros((n, r))
    U[np.arange(r), np.arange(r)] = 1.0
    return LowRankFactor(n=n, U=U, D=np.zeros(r), c=c, seed=seed)


def _diag_parts(W: SparseColMatrix, U: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Per-column diagonal of W^T W + W^T U D U^T W, without the decay factor.

    Entry i is ||w_i||^2 + g_i^T diag(D) g_i with g_i = U^T w_i; computed
    column-wise in O(nnz * r) with no n x n intermediate.
    """
    mat = W.mat
    colsq = np.asarray(mat.multiply(mat).sum(axis=0)).ravel()
    if U.shape[1] == 0:
        return colsq
    P = mat.T @ U  # row i = g_i
    quad = ((P * P) * D).sum(axis=1)
    return colsq + quad


class OperatorHandle:
    """Matvec access to the current iteration operator M.

    Binds W, the current factor, and c. The operator's diagonal vector is
    computed once at construction. Never materializes M unless
    materialize() is called explicitly.
    """

    def __init__(self, W: SparseColMatrix, factor: LowRankFactor, c: float):
        if not W.normalized:
            raise ConfigError("operator needs a column-normalized W")
        if factor.n != W.n:
            raise ConfigError(
                f"factor is over {factor.n} vertices but W has {W.n}"
            )
        self.W = W
        self.factor = factor
        self.c = c
        self._matT = W.mat.T
        self._diag = c * _diag_parts(W, factor.U, factor.D)

    @property
    def n(self) -> int:
        return self.W.n

    def diagonal(self) -> np.ndarray:
        return self._diag

    def apply(self, Z: np.ndarray) -> np.ndarray:
        """M @ Z for an n x s block Z.

        Computes c W^T (W Z + U (D (U^T (W Z)))) - diag * Z with at most
        three n x s work arrays alive at any point; cost O((nnz + n r) s).
        """
        Z = np.asarray(Z, dtype=np.float64)
        if Z.ndim != 2 or Z.shape[0] != self.n:
            raise ValueError(
                f"operand must be {self.n} x s, got shape {Z.shape}"
            )
        U, D = self.factor.U, self.factor.D
        Y = self.W.mat @ Z
        G = U.T @ Y
        T = U @ (D[:, None] * G)
        T += Y
        del Y
        out = self._matT @ T
        del T
        out *= self.c
        out -= self._diag[:, None] * Z
        return out

    def materialize(self) -> np.ndarray:
        """Dense n x n M, for the exact-eigendecomposition mode and tests."""
        M = self.apply(np.eye(self.n))
        return (M + M.T) / 2.0


def operator_apply(handle: OperatorHandle, Z: np.ndarray) -> np.ndarray:
    """Apply the bound iteration operator to a dense n x s block."""
    return handle.apply(Z)


def diagonal_of_iterate(handle: OperatorHandle) -> np.ndarray:
    """Diagonal of the bound iteration operator as a length-n vector."""
    return handle.diagonal()


def _select_pairs(evals: np.ndarray, order: str, k: int) -> np.ndarray:
    if order == "algebraic_desc":
        return np.argsort(evals)[::-1][:k]
    if order == "magnitude_desc":
        return np.argsort(np.abs(evals))[::-1][:k]
    raise ConfigError(f"eig_order must be one of {EIG_ORDERS}, got {order!r}")


def truncated_eig_dense(M: np.ndarray, r: int, order: str = "algebraic_desc"):
    """Top-r eigenpairs of a dense symmetric matrix.

    Returns (U, D) with orthonormal U (n x r) and D ordered per `order`.
    """
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    if r > n:
        raise ConfigError(f"rank {r} exceeds matrix order {n}")
    if not np.all(np.isfinite(M)):
        raise NumericError("eigendecomposition input has non-finite entries")
    evals, evecs = np.linalg.eigh((M + M.T) / 2.0)
    keep = _select_pairs(evals, order, r)
    return evecs[:, keep], evals[keep]


def _orthonormal_completion(U: np.ndarray, r: int) -> np.ndarray:
    """Deterministically extend U's orthonormal columns to r of them.

    Appends canonical basis vectors Gram-Schmidt-orthogonalized against
    everything kept so far, skipping near-dependent candidates.
    """
    n, q = U.shape
    if q >= r:
        return U[:, :r]
    cols = [U]
    width = q
    for e in range(n):
        if width >= r:
            break
        v = np.zeros(n)
        v[e] = 1.0
        for block in cols:
            v -= block @ (block.T @ v)
        nrm = np.linalg.norm(v)
        if nrm < 0.5:
            continue
        v /= nrm
        # second orthogonalization pass for numerical cleanliness
        for block in cols:
            v -= block @ (block.T @ v)
        v /= np.linalg.norm(v)
        cols.append(v[:, None])
        width += 1
    if width < r:
        raise NumericError("could not complete orthonormal basis")
    return np.hstack(cols)


def randomized_eig(apply, n: int, r: int, p: int, seed: int,
                   order: str = "algebraic_desc"):
    """Probabilistic spectral decomposition of a symmetric linear operator.

    Sketches the operator with an n x (r+p) standard-Gaussian block Z
    (seeded generator, stream laid out column-major), orthonormalizes the
    range of apply(Z), solves the small projected eigenproblem, and maps
    the eigenvectors back. Deterministic given the seed.

    Args:
        apply: closure computing M @ Z for dense n x s blocks; M must be
            symmetric.
        r: number of eigenpairs to return.
        p: oversampling count; r + p <= n.
        order: which pairs to keep, "algebraic_desc" or "magnitude_desc".

    Returns:
        (U, D): U is n x r with orthonormal columns, D the kept
        eigenvalues. If the sampled range collapses below r, the factor is
        padded (zero eigenvalues, deterministic orthonormal completion)
        and a RankCollapseWarning is emitted.
    """
    s = r + p
    if r < 1:
        raise ConfigError(f"rank must be >= 1, got {r}")
    if s > n:
        raise ConfigError(f"rank + oversample = {s} exceeds n = {n}")
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal(n * s).reshape((n, s), order="F")
    Y = apply(Z)
    del Z
    if not np.all(np.isfinite(Y)):
        raise NumericError("operator produced non-finite values")
    Q, R, _ = scipy.linalg.qr(Y, mode="economic", pivoting=True,
                              overwrite_a=True)
    del Y
    # pivoted-QR diagonal decays like the singular values; threshold it
    rdiag = np.abs(np.diagonal(R))
    q = s
    if rdiag.size == 0 or rdiag[0] == 0.0:
        q = 0
    else:
        q = int((rdiag > _RANK_TOL * rdiag[0]).sum())
    if q < s:
        warnings.warn(
            f"sampled range has numerical rank {q} < {s}; shrinking basis",
            RankCollapseWarning,
            stacklevel=2,
        )
        Q = np.ascontiguousarray(Q[:, :q])
    B = Q.T @ apply(Q) if q else np.zeros((0, 0))
    B = (B + B.T) / 2.0
    evals, evecs = np.linalg.eigh(B)
    keep = _select_pairs(evals, order, min(r, q))
    U = Q @ evecs[:, keep]
    D = evals[keep]
    if D.shape[0] < r:
        U = _orthonormal_completion(U, r)
        D = np.concatenate([D, np.zeros(r - D.shape[0])])
    return U, D


def lowrank_simrank(W: SparseColMatrix, cfg: SolveConfig,
                    mode: str = "randomized") -> LowRankFactor:
    """Run the factored SimRank iteration and return the final factor.

    Starts from S_0 = I (zero eigenvalues on canonical basis vectors) and
    for each of cfg.iterations steps eigendecomposes the current iteration
    operator, keeping cfg.rank pairs. mode "randomized" uses the
    probabilistic decomposition with per-iteration seeds cfg.seed + i;
    "dense_exact_eig" materializes the operator and decomposes it exactly
    (n capped by cfg.dense_limit).
    """
    if mode not in ("randomized", "dense_exact_eig"):
        raise ConfigError(f"mode must be randomized or dense_exact_eig, got {mode!r}")
    if not W.normalized:
        raise ConfigError("lowrank_simrank needs a column-normalized W")
    n = W.n
    r = cfg.require_rank(n)
    if mode == "dense_exact_eig":
        cfg.check_dense(n)
    factor = _zero_factor(n, r, cfg.c, cfg.seed)
    for i in range(cfg.iterations):
        handle = OperatorHandle(W, factor, cfg.c)
        if mode == "randomized":
            U, D = randomized_eig(
                handle.apply, n, r, cfg.oversample, cfg.seed + i, cfg.eig_order
            )
        else:
            U, D = truncated_eig_dense(handle.materialize(), r, cfg.eig_order)
        factor = LowRankFactor(
            n=n, U=U, D=D, c=cfg.c, iterations_done=i + 1, seed=cfg.seed
        )
    return factor


def refine_query_row(W: SparseColMatrix, factor: LowRankFactor,
                     vertex: int) -> np.ndarray:
    """One row of the one-step refined approximation.

    Evaluates row `vertex` of
        I + c W^T W + c W^T U D U^T W - c W^T diag(W^T W + W^T U D U^T W) W
    against the single basis vector of the query, via sparse and low-rank
    products only: O(nnz + n r), no dense n x n intermediate.
    """
    if not W.normalized:
        raise ConfigError("refined queries need a column-normalized W")
    if factor.n != W.n:
        raise ConfigError(f"factor is over {factor.n} vertices but W has {W.n}")
    n = W.n
    if not 0 <= vertex < n:
        raise IndexError(f"vertex {vertex} out of range [0, {n})")
    mat = W.mat
    U, D = factor.U, factor.D

    w = np.zeros(n)
    lo, hi = mat.indptr[vertex], mat.indptr[vertex + 1]
    w[mat.indices[lo:hi]] = mat.data[lo:hi]

    d = _diag_parts(W, U, D)
    z = U @ (D * (U.T @ w))
    row = mat.T @ (factor.c * (w + z - d * w))
    row = np.asarray(row).ravel()
    row[vertex] += 1.0
    return row


def save_factor_text(factor: LowRankFactor, path) -> None:
    """Text factor file.

    Line 1: ``simrank-factor v1``; line 2: ``n r c iterations seed``;
    line 3: the r diagonal values; then n lines of r values of U, all
    written with 17 significant digits.
    """
    with open(path, "w") as f:
        f.write("simrank-factor v1\n")
        f.write(
            f"{factor.n} {factor.r} {factor.c:.17g} "
            f"{factor.iterations_done} {factor.seed}\n"
        )
        f.write(" ".join(f"{v:.17g}" for v in factor.D))
        f.write("\n")
        for row in factor.U:
            f.write(" ".join(f"{v:.17g}" for v in row))
            f.write("\n")


def load_factor_text(path) -> LowRankFactor:
    with open(path) as f:
        head = f.readline().strip()
        if head != "simrank-factor v1":
            raise FormatError(f"bad factor header {head!r}")
        meta = f.readline().split()
        if len(meta) != 5:
            raise FormatError("expected 'n r c iterations seed' on line 2")
        n, r = int(meta[0]), int(meta[1])
        c = float(meta[2])
        iterations, seed = int(meta[3]), int(meta[4])
        dvals = f.readline().split()
        if len(dvals) != r:
            raise FormatError(f"expected {r} diagonal values, got {len(dvals)}")
        D = np.array([float(v) for v in dvals])
        U = np.empty((n, r))
        for i in range(n):
            row = f.readline().split()
            if len(row) != r:
                raise FormatError(f"row {i}: expected {r} values, got {len(row)}")
            U[i] = [float(v) for v in row]
    if not (np.all(np.isfinite(U)) and np.all(np.isfinite(D))):
        raise FormatError("factor file holds non-finite values")
    return LowRankFactor(n=n, U=U, D=D, c=c, iterations_done=iterations, seed=seed)


def save_factor_binary(factor: LowRankFactor, path) -> None:
    """Binary factor file: magic 'SRLR', LE u64 n, u64 r, f64 c, then D and
    U (column-major) as 8-byte floats."""
    with open(path, "wb") as f:
        f.write(_FACTOR_MAGIC)
        f.write(struct.pack("<QQd", factor.n, factor.r, factor.c))
        f.write(np.ascontiguousarray(factor.D, dtype="<f8").tobytes())
        f.write(np.asfortranarray(factor.U.astype("<f8", copy=False)).tobytes(order="F"))


def load_factor_binary(path) -> LowRankFactor:
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != _FACTOR_MAGIC:
            raise FormatError(f"bad magic {magic!r}, expected {_FACTOR_MAGIC!r}")
        n, r, c = struct.unpack("<QQd", f.read(24))
        D = np.frombuffer(f.read(8 * r), dtype="<f8").copy()
        buf = np.frombuffer(f.read(8 * n * r), dtype="<f8")
    if D.size != r or buf.size != n * r:
        raise FormatError("truncated factor file")
    U = buf.reshape((n, r), order="F").copy()
    if not (np.all(np.isfinite(U)) and np.all(np.isfinite(D))):
        raise FormatError("factor file holds non-finite values")
    return LowRankFactor(n=int(n), U=U, D=D, c=float(c))


def load_factor(path) -> LowRankFactor:
    """Load a factor file, sniffing text vs binary by the magic bytes."""
    with open(path, "rb") as f:
        magic = f.read(4)
    if magic == _FACTOR_MAGIC:
        return load_factor_binary(path)
    return load_factor_text(path)
