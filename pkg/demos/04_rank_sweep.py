#!/usr/bin/env python3
"""Sweep rank and decay on a synthetic triangulation mesh, CSV out.

Same output the `simrank sweep` subcommand produces; the last column is
wall time, so rows are reproducible up to that field.
"""
from simrank_lowrank import SolveConfig
from simrank_lowrank.metrics import reports_to_csv, sweep
from simrank_lowrank.synthetic import random_delaunay_graph


def main():
    adj = random_delaunay_graph(256, seed=12)
    print(f"# delaunay mesh: n = {adj.n}, nnz = {adj.mat.nnz}")
    cfg = SolveConfig(iterations=10, seed=3)
    reports = sweep(adj, "delaunay256", ranks=(3, 5, 10, 20),
                    cs=(0.4, 0.6), p_values=(0, 5), cfg=cfg)
    print(reports_to_csv(reports), end="")


if __name__ == "__main__":
    main()
