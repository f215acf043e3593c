"""Workloads and scaling studies behind the cost claims.

Sorting suites produce rows ``(kind, n, m, comparisons, steps, log2_eG,
C)`` with ``C = comparisons / (n + log2 e(G))``. Heap suites measure
ledger steps on push/pop workloads.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .generators import generate, known_log2_extensions
from .heap import UnifiedHeap
from .index_forest import PRODUCTION, Thresholds
from .oracle import COUNT_LIMIT, log2_extensions, working_set_terms
from .sorter import CountingComparator, run_sort
from .traces import random_heap_trace
from .unified_tree import UnifiedTree

__all__ = [
    "HEAP_SUITES",
    "SORT_SUITES",
    "HeapCost",
    "bench_rows",
    "interleaved_trace",
    "push_only_steps",
    "rows_to_csv",
    "run_heap_ops",
]

SORT_SUITES = {
    "merge": ("k-chains", {"k": 2}),
    "hamilton": ("chain", {}),
    "heapsort": ("edgeless", {}),
    "random": ("random-edges", {"p": 0.05}),
}
HEAP_SUITES = ("interleaved", "push-only", "working-set")


@dataclass
class HeapCost:
    steps: int
    pop_steps: int
    push_steps: int
    comparisons: int
    pops: list


def interleaved_trace(n: int) -> list[tuple]:
    """Push ``1, n+1, 2, n+2, ..., n, 2n`` and then pop everything."""
    ops: list[tuple] = []
    for k in range(1, n + 1):
        ops.append(("push", k))
        ops.append(("push", n + k))
    ops.extend([("pop",)] * (2 * n))
    return ops


def run_heap_ops(ops: Iterable[tuple], *, thresholds: Thresholds = PRODUCTION) -> HeapCost:
    """Execute a heap trace, splitting ledger steps between pushes and pops."""
    heap = UnifiedHeap(thresholds=thresholds)
    led = heap.ledger
    push_steps = pop_steps = 0
    pops = []
    for op in ops:
        before = led.steps
        if op[0] == "push":
            heap.push(op[1])
            push_steps += led.steps - before
        else:
            pops.append(heap.pop())
            pop_steps += led.steps - before
    return HeapCost(led.steps, pop_steps, push_steps, led.comparisons, pops)


def push_only_steps(n: int, *, thresholds: Thresholds = PRODUCTION) -> int:
    """Ledger steps for ``n`` consecutive ``add_leaf`` calls."""
    tree = UnifiedTree(thresholds=thresholds)
    for k in range(n):
        tree.add_leaf(k)
    return tree.ledger.steps


def bench_rows(
    suite: str,
    sizes: Sequence[int],
    seeds: Sequence[int],
    *,
    algorithm: str = "unitopsort",
    thresholds: Thresholds = PRODUCTION,
) -> list[list]:
    """Rows ``[suite, n, m, comparisons, steps, log2_eG, C]``, deterministic in the seeds."""
    rows: list[list] = []
    if suite in SORT_SUITES:
        kind, params = SORT_SUITES[suite]
        for n in sizes:
            for seed in seeds:
                g, order = generate(kind, n, seed, **params)
                run = run_sort(g, CountingComparator.from_order(order), algorithm, thresholds=thresholds)
                eg = known_log2_extensions(kind, n, **params)
                if eg is None and n <= COUNT_LIMIT:
                    eg = log2_extensions(g)
                c = run.comparisons / (n + eg) if eg is not None and n + eg > 0 else ""
                rows.append([suite, n, run.m, run.comparisons, run.steps, "" if eg is None else round(eg, 6), c])
    elif suite == "interleaved":
        for n in sizes:
            cost = run_heap_ops(interleaved_trace(n), thresholds=thresholds)
            rows.append([suite, n, 0, cost.comparisons, cost.steps, "", cost.steps / n])
    elif suite == "push-only":
        for n in sizes:
            steps = push_only_steps(n, thresholds=thresholds)
            rows.append([suite, n, 0, 0, steps, "", steps / n])
    elif suite == "working-set":
        for n in sizes:
            for seed in seeds:
                ops = random_heap_trace(random.Random(seed), n)
                cost = run_heap_ops(ops, thresholds=thresholds)
                budget = sum(working_set_terms(ops))
                rows.append([suite, n, 0, cost.comparisons, cost.pop_steps, "", cost.pop_steps / budget])
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return rows


def rows_to_csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "n", "m", "comparisons", "steps", "log2_eG", "C"])
    for r in rows:
        w.writerow([f"{x:.6f}" if isinstance(x, float) else x for x in r])
    return buf.getvalue()

