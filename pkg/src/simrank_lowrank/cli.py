"""Command-line interface.

Subcommands: compute (factored solve -> factor file), exact (dense
reference solve -> matrix file), query (rankings from a factor file),
evaluate (one scored configuration -> CSV), sweep (rank/c grid -> CSV).
Every run is deterministic given its flags; --seed is echoed in output.

Exit codes: 0 success, 1 usage or configuration, 2 file I/O or malformed
input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
import time

import numpy as np

from . import exact as exact_mod
from . import metrics as metrics_mod
from . import query as query_mod
from .config import DEFAULT_DENSE_LIMIT, EIG_ORDERS, SolveConfig
from .errors import (
    ConfigError,
    DenseLimitError,
    FormatError,
    MetricError,
    NumericError,
    ParseError,
)
from .graph import VertexLabels, column_normalize, parse_edge_list, parse_matrix_market
from .lowrank import (
    load_factor,
    lowrank_simrank,
    save_factor_binary,
    save_factor_text,
)

__all__ = ["main", "build_parser"]

EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERIC = 3


class _UsageError(Exception):
    # flag-validation failure: report with usage text, exit 1
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract reserves 2 for I/O
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_input_flags(p):
    p.add_argument("-i", "--input", required=True, help="graph file to read")
    p.add_argument(
        "--format",
        choices=("auto", "edgelist", "mtx"),
        default="auto",
        help="input format; auto picks mtx for .mtx paths",
    )


def _add_solver_flags(p, need_rank: bool):
    p.add_argument("--c", type=float, default=0.6,
                   help="decay factor in (0, 1), default 0.6")
    p.add_argument("--iters", type=int, default=10, metavar="K",
                   help="iteration count, default 10")
    if need_rank:
        p.add_argument("--rank", type=int, default=None,
                       help="number of eigenpairs kept")
        p.add_argument("--oversample", type=int, default=0, metavar="P",
                       help="extra random probes, default 0")
        p.add_argument("--seed", type=int, default=42,
                       help="random seed, default 42")
        p.add_argument("--order", choices=EIG_ORDERS, default="algebraic_desc",
                       help="which eigenpairs to keep")
    p.add_argument("--dense-limit", type=int, default=DEFAULT_DENSE_LIMIT,
                   help="largest n allowed to go dense")


def build_parser() -> _Parser:
    parser = _Parser(prog="simrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("compute", help="factored low-rank solve")
    _add_input_flags(p)
    _add_solver_flags(p, need_rank=True)
    p.add_argument("--mode", choices=("randomized", "dense_exact_eig"),
                   default="randomized")
    p.add_argument("-o", "--output", required=True,
                   help="factor file; .srlr writes binary, else text")

    p = sub.add_parser("exact", help="dense reference solve")
    _add_input_flags(p)
    _add_solver_flags(p, need_rank=False)
    p.add_argument("-o", "--output", required=True,
                   help="matrix file; .srdn writes binary, else text")

    p = sub.add_parser("query", help="rank vertices against a factor")
    p.add_argument("-i", "--input", required=True, help="factor file")
    p.add_argument("--graph", help="graph file, required with --refined")
    p.add_argument("--format", choices=("auto", "edgelist", "mtx"),
                   default="auto")
    p.add_argument("--labels", help="file with one vertex label per line")
    who = p.add_mutually_exclusive_group(required=True)
    who.add_argument("--vertex", type=int, help="query vertex id")
    who.add_argument("--label", help="query vertex label (needs --labels)")
    p.add_argument("--top", type=int, default=10, metavar="K")
    p.add_argument("--refined", action="store_true",
                   help="push the factor once through the graph")
    p.add_argument("--digits", type=int, default=6,
                   help="significant digits in the table")
    p.add_argument("--records", action="store_true",
                   help="tab-separated machine output instead of a table")

    p = sub.add_parser("evaluate", help="score one configuration")
    _add_input_flags(p)
    _add_solver_flags(p, need_rank=True)
    p.add_argument("-o", "--output", help="CSV path, default stdout")

    p = sub.add_parser("sweep", help="score a rank/c grid")
    _add_input_flags(p)
    _add_solver_flags(p, need_rank=True)
    p.add_argument("--ranks", required=True,
                   help="comma-separated rank grid, e.g. 3,5,10")
    p.add_argument("--cs", help="comma-separated c grid, default --c")
    p.add_argument("-o", "--output", help="CSV path, default stdout")

    return parser


@contextlib.contextmanager
def _thread_cap():
    raw = os.environ.get("SIMRANK_THREADS")
    if not raw:
        yield
        return
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"SIMRANK_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise ConfigError(f"SIMRANK_THREADS must be >= 1, got {cap}")
    from threadpoolctl import threadpool_limits

    with threadpool_limits(limits=cap):
        yield


def _load_graph(path: str, fmt: str):
    if fmt == "auto":
        fmt = "mtx" if path.endswith(".mtx") else "edgelist"
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as e:
        raise OSError(f"cannot read {path}: {e.strerror or e}") from e
    if fmt == "mtx":
        return parse_matrix_market(data)
    adj, _ = parse_edge_list(data)
    return adj


def _load_labels(path: str) -> VertexLabels:
    try:
        with open(path) as f:
            labels = [line.rstrip("\n") for line in f if line.strip()]
    except OSError as e:
        raise OSError(f"cannot read {path}: {e.strerror or e}") from e
    return VertexLabels(labels)


def _solve_config(args, need_rank: bool) -> SolveConfig:
    kwargs = dict(c=args.c, iterations=args.iters,
                  dense_limit=args.dense_limit)
    if need_rank:
        kwargs.update(rank=args.rank, oversample=args.oversample,
                      seed=args.seed, eig_order=args.order)
    try:
        return SolveConfig(**kwargs)
    except ConfigError as e:
        raise _UsageError(str(e)) from None


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w") as f:
            f.write(text)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e


def _cmd_compute(args) -> int:
    cfg = _solve_config(args, need_rank=True)
    adj = _load_graph(args.input, args.format)
    W = column_normalize(adj)
    t0 = time.perf_counter()
    factor = lowrank_simrank(W, cfg, mode=args.mode)
    secs = time.perf_counter() - t0
    try:
        if args.output.endswith(".srlr"):
            save_factor_binary(factor, args.output)
        else:
            save_factor_text(factor, args.output)
    except OSError as e:
        raise OSError(f"cannot write {args.output}: {e.strerror or e}") from e
    print(
        f"n={factor.n} r={factor.r} c={cfg.c:g} k={cfg.iterations} "
        f"seed={cfg.seed} secs={secs:.3f}"
    )
    return 0


def _cmd_exact(args) -> int:
    cfg = _solve_config(args, need_rank=False)
    adj = _load_graph(args.input, args.format)
    W = column_normalize(adj)
    S = exact_mod.simrank_matrix_iter(W, cfg)
    try:
        if args.output.endswith(".srdn"):
            exact_mod.save_dense_binary(S, args.output)
        else:
            exact_mod.save_dense_text(S, args.output)
    except OSError as e:
        raise OSError(f"cannot write {args.output}: {e.strerror or e}") from e
    return 0


def _cmd_query(args) -> int:
    if args.top < 0:
        raise ConfigError(f"--top must be >= 0, got {args.top}")
    if args.digits < 1:
        raise ConfigError(f"--digits must be >= 1, got {args.digits}")
    try:
        factor = load_factor(args.input)
    except FileNotFoundError as e:
        raise OSError(f"cannot read {args.input}: {e.strerror or e}") from e
    W = None
    mode = "factor"
    if args.refined:
        if not args.graph:
            raise ConfigError("--refined needs --graph pointing at the input graph")
        adj = _load_graph(args.graph, args.format)
        if adj.n != factor.n:
            raise ConfigError(
                f"graph has {adj.n} vertices but factor has {factor.n}"
            )
        W = column_normalize(adj)
        mode = "refined"
    labels = _load_labels(args.labels) if args.labels else None
    if labels is not None and len(labels) != factor.n:
        raise ConfigError(
            f"label file has {len(labels)} entries but factor has {factor.n}"
        )
    if args.label is not None:
        if labels is None:
            raise ConfigError("--label needs --labels to map names to ids")
        result = query_mod.top_k_by_label(factor, labels, args.label,
                                          args.top, W=W, mode=mode)
    else:
        if not 0 <= args.vertex < factor.n:
            raise ConfigError(
                f"--vertex {args.vertex} out of range [0, {factor.n})"
            )
        result = query_mod.top_k(factor, args.vertex, args.top, W=W,
                                 mode=mode, labels=labels)
    text = (query_mod.format_records(result) if args.records
            else query_mod.format_table(result, digits=args.digits))
    if text:
        print(text)
    return 0


def _parse_grid(raw: str, kind, flag: str):
    try:
        vals = [kind(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"{flag} expects comma-separated values, got {raw!r}")
    if not vals:
        raise ConfigError(f"{flag} expects at least one value")
    return vals


def _emit_csv(reports, output) -> int:
    text = metrics_mod.reports_to_csv(reports)
    if output:
        _write_text(output, text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_evaluate(args) -> int:
    cfg = _solve_config(args, need_rank=True)
    adj = _load_graph(args.input, args.format)
    name = os.path.splitext(os.path.basename(args.input))[0]
    report = metrics_mod.evaluate_point(adj, name, cfg)
    return _emit_csv([report], args.output)


def _cmd_sweep(args) -> int:
    cfg = _solve_config(args, need_rank=True)
    ranks = _parse_grid(args.ranks, int, "--ranks")
    cs = _parse_grid(args.cs, float, "--cs") if args.cs else [args.c]
    adj = _load_graph(args.input, args.format)
    name = os.path.splitext(os.path.basename(args.input))[0]
    reports = metrics_mod.sweep(adj, name, ranks, cs,
                                p_values=[args.oversample], cfg=cfg)
    return _emit_csv(reports, args.output)


_COMMANDS = {
    "compute": _cmd_compute,
    "exact": _cmd_exact,
    "query": _cmd_query,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with _thread_cap():
            return _COMMANDS[args.command](args)
    except _UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"simrank: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, DenseLimitError) as e:
        print(f"simrank: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except KeyError as e:
        # unknown label lookups carry their suggestions in the message
        print(f"simrank: error: {e.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, FormatError, OSError) as e:
        print(f"simrank: error: {e}", file=sys.stderr)
        return EXIT_IO
    except (NumericError, MetricError, np.linalg.LinAlgError) as e:
        print(f"simrank: error: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
