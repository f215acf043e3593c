"""Sorting when part of the order is already known.

The comparator is played by a hidden permutation. Known relations come as a
DAG, and the number of comparisons should track log2 e(G), the information
still missing, rather than n log n.
"""

from unitopsort import CountingComparator, run_sort
from unitopsort.generators import generate
from unitopsort.oracle import log2_extensions

print(f"{'kind':<24} {'n':>3} {'log2 e(G)':>10} {'unitopsort':>11} {'full':>5} {'mergesort':>10}")
for kind, params in [
    ("chain", {}),
    ("hamiltonian-plus-noise", {"q": 0.1}),
    ("k-chains", {"k": 2}),
    ("interval-induced", {"w": 3}),
    ("random-edges", {"p": 0.15}),
    ("edgeless", {}),
]:
    g, order = generate(kind, 18, seed=3, **params)
    counts = []
    for algo in ("unitopsort", "full", "mergesort"):
        run = run_sort(g, CountingComparator.from_order(order), algo)
        assert run.result == order
        counts.append(run.comparisons)
    print(f"{kind:<24} {g.n:>3} {log2_extensions(g):>10.2f} {counts[0]:>11} {counts[1]:>5} {counts[2]:>10}")
