"""Evaluation quantities for approximate similarity matrices.

Spectral discrepancy between normalized matrices, off-diagonal Pearson
correlation, Frobenius relative error, and a sweep driver producing CSV
rows over rank / decay-factor / oversampling grids. Spectral norms come
from power iteration, so each metric costs O(n^2); the CSV flags which
metric each column holds via the header names.
"""

from __future__ import annotations

import io
import itertools
import time
from dataclasses import dataclass

import numpy as np

from .config import SolveConfig
from .errors import MetricError
from .exact import best_rank_r_baseline, simrank_matrix_iter
from .graph import AdjacencyMatrix, column_normalize
from .lowrank import lowrank_simrank

__all__ = [
    "EvalReport",
    "CSV_HEADER",
    "spectral_norm",
    "spectral_err",
    "offdiag_corr",
    "relative_error",
    "evaluate_point",
    "sweep",
    "reports_to_csv",
]

CSV_HEADER = "graph,n,nnz,avg_degree,rank,c,p,k,err,corr,rel_err,baseline_rel_err,seconds"

_POWER_TOL = 1e-8
_POWER_MAXITER = 1000


@dataclass(frozen=True)
class EvalReport:
    """One evaluated (graph, rank, c, p) point.

    err is the spectral discrepancy of the normalized matrices, corr the
    off-diagonal Pearson correlation, rel_err / baseline_rel_err Frobenius
    relative errors of the factored method and of the best-rank-r
    truncation of the exact matrix. peak_mem_bytes is the solver's dense
    working-set bound 4 n (r + p) doubles, not a measurement.
    """

    graph: str
    n: int
    nnz: int
    avg_degree: float
    rank: int
    c: float
    p: int
    k: int
    err: float
    corr: float
    rel_err: float
    baseline_rel_err: float
    seconds: float
    peak_mem_bytes: int

    def csv_row(self) -> str:
        return ",".join(
            [
                self.graph,
                str(self.n),
                str(self.nnz),
                f"{self.avg_degree:.17g}",
                str(self.rank),
                f"{self.c:.17g}",
                str(self.p),
                str(self.k),
                f"{self.err:.17g}",
                f"{self.corr:.17g}",
                f"{self.rel_err:.17g}",
                f"{self.baseline_rel_err:.17g}",
                f"{self.seconds:.3f}",
            ]
        )


def spectral_norm(A: np.ndarray) -> float:
    """2-norm of a symmetric matrix by power iteration.

    Deterministic seeded start vector; stops when the norm estimate moves
    by less than 1e-8 relatively, or after 1000 iterations.
    """
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    if n == 0:
        return 0.0
    rng = np.random.default_rng(1729)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(_POWER_MAXITER):
        w = A @ v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(nw - est) <= _POWER_TOL * max(nw, 1.0):
            return nw
        est = nw
    return est


def spectral_err(S: np.ndarray, S_tilde: np.ndarray) -> float:
    """|| S/||S||_2 - S~/||S~||_2 ||_2, scale-invariant by construction."""
    S = np.asarray(S, dtype=np.float64)
    S_tilde = np.asarray(S_tilde, dtype=np.float64)
    if S.shape != S_tilde.shape:
        raise MetricError(f"shape mismatch: {S.shape} vs {S_tilde.shape}")
    ns = spectral_norm(S)
    nt = spectral_norm(S_tilde)
    if ns == 0.0 or nt == 0.0:
        raise MetricError("spectral_err needs nonzero matrices")
    return spectral_norm(S / ns - S_tilde / nt)


def offdiag_corr(S: np.ndarray, S_tilde: np.ndarray) -> float:
    """Pearson correlation over the n^2 - n off-diagonal entries."""
    S = np.asarray(S, dtype=np.float64)
    S_tilde = np.asarray(S_tilde, dtype=np.float64)
    if S.shape != S_tilde.shape:
        raise MetricError(f"shape mismatch: {S.shape} vs {S_tilde.shape}")
    n = S.shape[0]
    if n < 2:
        raise MetricError("correlation needs n >= 2")
    mask = ~np.eye(n, dtype=bool)
    x = S[mask]
    y = S_tilde[mask]
    xc = x - x.mean()
    yc = y - y.mean()
    sx = float(np.linalg.norm(xc))
    sy = float(np.linalg.norm(yc))
    if sx == 0.0 or sy == 0.0:
        raise MetricError("zero off-diagonal variance; correlation undefined")
    return float(np.clip(xc @ yc / (sx * sy), -1.0, 1.0))


def relative_error(S: np.ndarray, S_tilde: np.ndarray) -> float:
    """Frobenius relative error ||S - S~||_F / ||S||_F."""
    S = np.asarray(S, dtype=np.float64)
    S_tilde = np.asarray(S_tilde, dtype=np.float64)
    if S.shape != S_tilde.shape:
        raise MetricError(f"shape mismatch: {S.shape} vs {S_tilde.shape}")
    denom = float(np.linalg.norm(S))
    if denom == 0.0:
        raise MetricError("relative_error needs a nonzero reference matrix")
    return float(np.linalg.norm(S - S_tilde) / denom)


def evaluate_point(adj: AdjacencyMatrix, name: str, cfg: SolveConfig,
                   S_exact: np.ndarray | None = None) -> EvalReport:
    """Run the factored solver at one configuration and score it.

    Computes the exact dense matrix if not supplied (n capped by
    cfg.dense_limit), runs lowrank_simrank in randomized mode, and fills
    an EvalReport including the best-rank-r baseline on the same exact S.
    """
    n = adj.n
    cfg.check_dense(n)
    r = cfg.require_rank(n)
    W = column_normalize(adj)
    if S_exact is None:
        S_exact = simrank_matrix_iter(W, cfg)
    t0 = time.perf_counter()
    factor = lowrank_simrank(W, cfg, mode="randomized")
    seconds = time.perf_counter() - t0
    S_tilde = factor.reconstruct_dense()
    baseline = best_rank_r_baseline(S_exact, r)
    return EvalReport(
        graph=name,
        n=n,
        nnz=adj.nnz,
        avg_degree=adj.nnz / n,
        rank=r,
        c=cfg.c,
        p=cfg.oversample,
        k=cfg.iterations,
        err=spectral_err(S_exact, S_tilde),
        corr=offdiag_corr(S_exact, S_tilde),
        rel_err=relative_error(S_exact, S_tilde),
        baseline_rel_err=relative_error(S_exact, baseline),
        seconds=seconds,
        peak_mem_bytes=4 * n * (r + cfg.oversample) * 8,
    )


def sweep(adj: AdjacencyMatrix, name: str, ranks, cs, p_values=(0,),
          cfg: SolveConfig | None = None) -> list[EvalReport]:
    """Evaluate every (rank, c, p) combination on one graph.

    Point i gets seed cfg.seed + i, so points are independent and the row
    order is the deterministic itertools.product order. The exact matrix
    is computed once per c and shared across ranks.
    """
    if cfg is None:
        cfg = SolveConfig()
    ranks = list(ranks)
    cs = list(cs)
    p_values = list(p_values)
    if not ranks or not cs or not p_values:
        raise MetricError("sweep needs non-empty rank, c, and p grids")
    exact_cache: dict[float, np.ndarray] = {}
    reports = []
    for idx, (r, c, p) in enumerate(itertools.product(ranks, cs, p_values)):
        point = cfg.with_(rank=int(r), c=float(c), oversample=int(p),
                          seed=cfg.seed + idx)
        if point.c not in exact_cache:
            W = column_normalize(adj)
            exact_cache[point.c] = simrank_matrix_iter(W, point)
        reports.append(
            evaluate_point(adj, name, point, S_exact=exact_cache[point.c])
        )
    return reports


def reports_to_csv(reports) -> str:
    """Render EvalReports as CSV text with the fixed header."""
    buf = io.StringIO()
    buf.write(CSV_HEADER)
    buf.write("\n")
    for rep in reports:
        buf.write(rep.csv_row())
        buf.write("\n")
    return buf.getvalue()
