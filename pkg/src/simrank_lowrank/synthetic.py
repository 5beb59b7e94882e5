"""Seeded random graph generators for benchmarks and property tests."""

from __future__ import annotations

import numpy as np
import scipy.spatial

from .errors import ConfigError
from .graph import AdjacencyMatrix, adjacency_from_edges

__all__ = ["random_digraph", "random_delaunay_graph"]


def random_digraph(n: int, p: float, seed: int,
                   allow_self_loops: bool = False) -> AdjacencyMatrix:
    """Erdos-Renyi style directed graph: each ordered pair independently
    becomes an edge with probability p. Guaranteed at least one edge (the
    draw repeats with shifted seeds until something lands)."""
    if n < 2:
        raise ConfigError(f"need n >= 2, got {n}")
    if not 0.0 < p <= 1.0:
        raise ConfigError(f"edge probability must be in (0, 1], got {p}")
    for attempt in range(1000):
        rng = np.random.default_rng(seed + attempt)
        mask = rng.random((n, n)) < p
        if not allow_self_loops:
            np.fill_diagonal(mask, False)
        rows, cols = np.nonzero(mask)
        if rows.size:
            break
    else:
        raise ConfigError("no edges after 1000 draws; raise p")
    return adjacency_from_edges(n, rows, cols, np.ones(rows.size))


def random_delaunay_graph(n: int, seed: int) -> AdjacencyMatrix:
    """Delaunay triangulation of n uniform random points in the unit
    square, as a symmetric unweighted adjacency matrix. Average degree is
    near 6 for large n, matching planar-triangulation benchmarks."""
    if n < 4:
        raise ConfigError(f"need n >= 4 points, got {n}")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    tri = scipy.spatial.Delaunay(pts)
    edges = set()
    for simplex in tri.simplices:
        for a in range(3):
            u, v = int(simplex[a]), int(simplex[(a + 1) % 3])
            edges.add((min(u, v), max(u, v)))
    rows, cols = [], []
    for u, v in edges:
        rows.extend((u, v))
        cols.extend((v, u))
    return adjacency_from_edges(n, rows, cols, np.ones(len(rows)))
