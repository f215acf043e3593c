"""``unitopsort`` command line.

Exit codes: 0 on success, 1 when a verification fails, 2 on usage or input
errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path
from typing import Sequence

from .bench import HEAP_SUITES, SORT_SUITES, bench_rows, rows_to_csv
from .checks import InvariantViolation
from .generators import KINDS, generate
from .graph import DagError, format_dag, format_order, parse_dag, parse_order
from .index_forest import PRESETS, PRODUCTION, SCALED, Thresholds
from .ledger import LedgerDrift
from .oracle import COUNT_LIMIT, count_linear_extensions, reference_heap_replay
from .sorter import ALGORITHMS, CountingComparator, InconsistentComparator, interval_order_violations, run_sort
from .traces import (
    TraceError,
    format_tree_trace,
    fuzz,
    inject_fault,
    parse_heap_trace,
    parse_tree_trace,
    replay_heap_trace,
    replay_tree_trace,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None


def _thresholds(args) -> Thresholds:
    if args.scaled_thresholds:
        return SCALED
    return PRESETS[args.thresholds] if args.thresholds else PRODUCTION


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_common(p: argparse.ArgumentParser, *, check_default: str = "off") -> None:
    p.add_argument("--scaled-thresholds", action="store_true", help="small index-tree thresholds for desk-scale runs")
    p.add_argument("--thresholds", choices=sorted(PRESETS), help="named threshold preset")
    p.add_argument("--check", choices=("off", "fast", "full"), default=check_default, help="invariant checking")


# -- subcommands -------------------------------------------------------------


def cmd_gen(args) -> int:
    params = {"k": args.k, "p": args.p, "q": args.q, "w": args.w}
    try:
        g, order = generate(args.kind, args.n, args.seed, **params)
    except ValueError as e:
        raise UsageError(str(e)) from None
    print(f"seed={args.seed}", file=sys.stderr)
    if args.dag is None and args.order is None:
        sys.stdout.write(format_dag(g) + format_order(order))
        return EXIT_OK
    _write(args.dag, format_dag(g))
    _write(args.order, format_order(order))
    return EXIT_OK


def _load(args):
    g = parse_dag(_read(args.dag))
    order = parse_order(_read(args.order), g.n) if args.order else None
    return g, order


def cmd_sort(args) -> int:
    g, order = _load(args)
    if order is None:
        raise UsageError("sort needs --order: the hidden order answers the comparisons")
    less = CountingComparator.from_order(order)
    try:
        run = run_sort(g, less, args.algo, thresholds=_thresholds(args), debug=args.check != "off")
    except InconsistentComparator as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return EXIT_FAIL
    if g.n <= COUNT_LIMIT:
        run.log2_eg = math.log2(count_linear_extensions(g))
    sys.stdout.write(format_order(run.result))
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "m", "comparisons", "steps", "log2_eG", "algorithm"])
        w.writerow(run.csv_row())
        _write(args.csv, buf.getvalue())
    print(
        f"n={run.n} m={run.m} comparisons={run.comparisons} steps={run.steps} "
        f"preprocessing_comparisons={run.preprocessing_comparisons} algorithm={run.algorithm}",
        file=sys.stderr,
    )
    bad = run.result != order or run.preprocessing_comparisons != 0
    if run.graph is not None and interval_order_violations(run.graph, run.push_rank, run.pop_rank):
        bad = True
    if bad:
        print("FAIL: output differs from the hidden order", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_count(args) -> int:
    g = parse_dag(_read(args.dag))
    if g.n > COUNT_LIMIT:
        raise UsageError(f"exact counting supports n <= {COUNT_LIMIT}, got n = {g.n}")
    e = count_linear_extensions(g)
    print(f"e(G) = {e}")
    print(f"log2 e(G) = {math.log2(e):.6f}")
    return EXIT_OK


def cmd_heap_replay(args) -> int:
    ops = parse_heap_trace(_read(args.trace))
    try:
        rep = replay_heap_trace(ops, thresholds=_thresholds(args), check=args.check)
    except (InvariantViolation, LedgerDrift) as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write("".join(f"{x}\n" for x in rep.pops))
    if args.csv:
        _write(args.csv, rep.csv())
    if rep.pops != reference_heap_replay(ops):
        print("FAIL: pop sequence differs from the reference heap", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_fuzz(args) -> int:
    res = fuzz(
        args.ops,
        args.n_cap,
        args.seed,
        thresholds=_thresholds(args),
        check=args.check,
        check_every=args.check_every,
        corrupt=inject_fault if args.inject_fault else None,
    )
    if res.passed:
        print(f"PASS seed={res.seed} ops={res.ops_run}")
        return EXIT_OK
    print(f"FAIL seed={res.seed} after {res.ops_run} ops: invariant {res.invariant}: {res.message}")
    print(f"witness: {len(res.witness)} ops")
    text = format_tree_trace(res.witness)
    if args.witness:
        _write(args.witness, text)
    else:
        sys.stdout.write(text)
    return EXIT_FAIL


def cmd_verify(args) -> int:
    if args.trace:
        ops = parse_tree_trace(_read(args.trace))
        try:
            replay_tree_trace(ops, thresholds=_thresholds(args), check=args.check)
        except (InvariantViolation, LedgerDrift) as e:
            print(f"FAIL: {e}")
            return EXIT_FAIL
        print(f"PASS: {len(ops)} operations, invariants hold")
        return EXIT_OK
    if not (args.dag and args.order):
        raise UsageError("verify needs --trace, or both --dag and --order")
    g, order = _load(args)
    pos = {v: k for k, v in enumerate(order)}
    for u, v in g.edges:
        if pos[u] > pos[v]:
            print(f"FAIL: edge {u} -> {v} is violated by the order")
            return EXIT_FAIL
    print("PASS: order is a linear extension")
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = bench_rows(args.suite, args.sizes, args.seeds, algorithm=args.algo, thresholds=_thresholds(args))
    _write(args.csv, rows_to_csv(rows))
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unitopsort", description="Sorting under partial information and unified-bound heaps.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a DAG and a compatible hidden order")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=2, help="number of chains (k-chains)")
    p.add_argument("--p", type=float, default=0.1, help="edge probability (random-edges)")
    p.add_argument("--q", type=float, default=0.1, help="off-path fraction (hamiltonian-plus-noise)")
    p.add_argument("--w", type=int, default=4, help="maximum interval length (interval-induced)")
    p.add_argument("--dag", help="DAG output file")
    p.add_argument("--order", help="order output file")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sort", help="sort a DAG's vertices using a hidden order as comparator")
    p.add_argument("--dag", required=True)
    p.add_argument("--order", required=True)
    p.add_argument("--algo", choices=ALGORITHMS, default="full")
    p.add_argument("--csv")
    _add_common(p)
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("count", help="exact number of linear extensions")
    p.add_argument("--dag", required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("heap-replay", help="replay a push/pop trace and log per-op costs")
    p.add_argument("trace")
    p.add_argument("--csv")
    _add_common(p)
    p.set_defaults(func=cmd_heap_replay)

    p = sub.add_parser("fuzz", help="random tree traces under invariant checks")
    p.add_argument("--ops", type=int, default=10_000)
    p.add_argument("--n-cap", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check-every", type=int, default=1)
    p.add_argument("--witness", help="where to write a shrunk failing trace")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    _add_common(p, check_default="full")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("verify", help="check an order against a DAG, or replay a tree trace")
    p.add_argument("--dag")
    p.add_argument("--order")
    p.add_argument("--trace", help="tree trace to replay under invariant checks")
    _add_common(p, check_default="full")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="scaling study as CSV")
    p.add_argument("suite", choices=sorted([*SORT_SUITES, *HEAP_SUITES]))
    p.add_argument("--sizes", type=_int_list, default=[256, 512, 1024])
    p.add_argument("--seeds", type=_int_list, default=[0])
    p.add_argument("--algo", choices=ALGORITHMS, default="unitopsort")
    p.add_argument("--csv")
    _add_common(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DagError, TraceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
