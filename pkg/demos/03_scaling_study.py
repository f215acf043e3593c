"""Scaling studies: comparisons and steps per element across sizes.

Writes the same CSV rows as ``unitopsort bench`` and summarises them with
numpy. Scaled thresholds keep the cleanup machinery active at these sizes.
"""

import numpy as np

from unitopsort.bench import bench_rows, rows_to_csv
from unitopsort.index_forest import SCALED

sizes = [256, 512, 1024, 2048, 4096]
for suite in ("merge", "hamilton", "heapsort"):
    rows = bench_rows(suite, sizes, seeds=[0, 1], thresholds=SCALED)
    n = np.array([r[1] for r in rows], dtype=float)
    comps = np.array([r[3] for r in rows], dtype=float)
    per_n = comps / n
    print(f"{suite:<9} comparisons/n by size:", np.round(per_n.reshape(len(sizes), -1).mean(axis=1), 2))
    if suite == "heapsort":
        print("          comparisons/(n log2 n):", np.round((comps / (n * np.log2(n))).reshape(len(sizes), -1).mean(axis=1), 2))

rows = bench_rows("push-only", [1 << e for e in range(10, 16)], seeds=[0], thresholds=SCALED)
print("\npush-only steps/n:", [round(r[-1], 1) for r in rows])
print(rows_to_csv(rows[:2]), end="")
