"""Sorting under partial information, built on a heap with the unified bound.

Main entry points:

* :class:`UnifiedHeap`, a priority queue whose pop of ``x`` costs
  ``O(min_y 1 + log|a(x) - a(y)| + log(b(x) - b(y)))`` amortized, over items
  ``y`` popped earlier (``a`` and ``b`` are push and pop ranks).
* :func:`uni_top_sort` and :func:`sort_under_partial_info`, which sort the
  vertices of a DAG of known relations with ``O(log e(G) + n)`` comparisons.
"""

from .checks import InvariantViolation, check_invariants
from .graph import Dag, DagError, Reduction, longest_path, parse_dag, reduce, topological_order
from .heap import UnifiedHeap
from .index_forest import DESK, PRESETS, PRODUCTION, SCALED, Thresholds, threshold
from .ledger import CostLedger, budget_check, reconcile
from .main_tree import INF
from .oracle import count_linear_extensions, enumerate_linear_extensions, reference_heap_replay
from .sorter import CountingComparator, galloping_merge, run_sort, sort_under_partial_info, uni_top_sort
from .unified_tree import UnifiedTree

__all__ = [
    "CostLedger",
    "CountingComparator",
    "DESK",
    "Dag",
    "DagError",
    "INF",
    "InvariantViolation",
    "PRESETS",
    "PRODUCTION",
    "Reduction",
    "SCALED",
    "Thresholds",
    "UnifiedHeap",
    "UnifiedTree",
    "budget_check",
    "check_invariants",
    "count_linear_extensions",
    "enumerate_linear_extensions",
    "galloping_merge",
    "longest_path",
    "parse_dag",
    "reconcile",
    "reduce",
    "reference_heap_replay",
    "run_sort",
    "sort_under_partial_info",
    "threshold",
    "topological_order",
    "uni_top_sort",
]
