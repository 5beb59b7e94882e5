#!/usr/bin/env python3
"""Top-k similarity queries from a factor, plain and refined."""
from pathlib import Path

from simrank_lowrank import SolveConfig, column_normalize, parse_matrix_market
from simrank_lowrank.lowrank import lowrank_simrank
from simrank_lowrank.query import format_table, top_k

DATA = Path(__file__).resolve().parents[1] / "data"


def main():
    adj = parse_matrix_market((DATA / "chesapeake.mtx").read_bytes())
    W = column_normalize(adj)
    cfg = SolveConfig(c=0.5, iterations=10, rank=10, oversample=5, seed=1)
    factor = lowrank_simrank(W, cfg, mode="randomized")

    for vertex in (0, 7, 33):
        print(f"\ntop 5 matches for vertex {vertex} (factor row):")
        print(format_table(top_k(factor, vertex, 5), digits=4))

    # refined mode pushes the factor once more through the graph before
    # reading the row; it needs W at query time
    vertex = 7
    print(f"\nsame query for vertex {vertex}, refined row:")
    print(format_table(top_k(factor, vertex, 5, W=W, mode="refined"),
                       digits=4))


if __name__ == "__main__":
    main()
