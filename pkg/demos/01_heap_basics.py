"""A heap whose pops get cheaper when they stay close to earlier pops.

Push 1, n+1, 2, n+2, ..., n, 2n and then pop everything. Each popped item
sits next to the previous one in push order, so the unified bound totals
O(n), while the working-set bound charges about log n per pop.
"""

import math

from unitopsort import UnifiedHeap
from unitopsort.bench import interleaved_trace, run_heap_ops
from unitopsort.index_forest import SCALED
from unitopsort.oracle import unified_bound_terms, working_set_terms

h = UnifiedHeap()
for x in [5, 3, 8, 1]:
    h.push(x)
print("pops:", [h.pop() for _ in range(4)])

print(f"\n{'n':>6} {'unified/n':>10} {'working-set/n':>14} {'steps/n':>8}")
for e in range(8, 14):
    n = 1 << e
    ops = interleaved_trace(n)
    ub = sum(unified_bound_terms(ops)) / n
    ws = sum(working_set_terms(ops)) / n
    steps = run_heap_ops(ops, thresholds=SCALED).steps / n
    print(f"{n:>6} {ub:>10.2f} {ws:>14.2f} {steps:>8.1f}")
print(f"\nworking-set/n tracks log2 n ({math.log2(1 << 13):.0f} at the last row); steps/n stays flat.")
