"""From-scratch validation of the unified tree.

:func:`check_invariants` recomputes everything the structure caches and
raises :class:`InvariantViolation` naming the broken property and a
witness. It never charges the cost ledger.

Fast mode is ``O(m + sum |L_j|)``. Full mode also checks that every leaf's
leader height is at most ``d(i) + 3`` using the brute-force depth budget,
which is quadratic and meant for small trees.
"""

from __future__ import annotations

import math

import numpy as np

from .ledger import reconcile
from .main_tree import INF, NEVER
from .oracle import d_naive_all

__all__ = ["InvariantViolation", "check_invariants"]


class InvariantViolation(AssertionError):
    """A structural invariant failed; ``invariant`` names which one."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"invariant {invariant}: {message}")
        self.invariant = invariant
        self.message = message


def _fail(name: str, message: str):
    raise InvariantViolation(name, message)


def _check_main(main) -> list[int]:
    m, n = main.m, main.n
    active = main.active
    if m & (m - 1) or m < 2:
        _fail("m", f"leaf count {m} is not a power of two >= 2")
    if not n + 1 <= m <= 2 * max(n, 1):
        _fail("m", f"leaf count {m} outside [n + 1, 2 max(n, 1)] for n = {n}")
    if active[1]:
        _fail("root", "root is active")
    for i in range(1, m + 1):
        if bool(active[m + i - 1]) != (i <= n):
            _fail("(1)", f"leaf {i} is {'active' if active[m + i - 1] else 'passive'} with n = {n}")
    for x in range(1, m):
        if active[x] and not (active[2 * x] and active[2 * x + 1]):
            _fail("(2)", f"active node {x} has a passive child")

    # Leader sweep; also confirms that each active node under one leader).
    leaders = main.leaders() if n else []
    covered = 0
    expected_next = 1
    for x in leaders:
        if not main.is_leader(x):
            _fail("leader-cover", f"node {x} found by the sweep is not a leader")
        if main.leftmost(x) != expected_next:
            _fail("leader-cover", f"leader {x} starts at leaf {main.leftmost(x)}, expected {expected_next}")
        expected_next = main.rightmost(x) + 1
        covered += (2 << main.height(x)) - 1
    if expected_next != n + 1:
        _fail("leader-cover", f"leaders cover leaves up to {expected_next - 1}, n = {n}")
    if covered != sum(active):
        _fail("leader-cover", f"{sum(active) - covered} active nodes lie under no leader")

    for a, b in zip(leaders, leaders[1:]):
        if abs(main.height(a) - main.height(b)) > 2:
            _fail("(3)", f"leaders {a} (h={main.height(a)}) and {b} (h={main.height(b)}) differ by more than 2")
    for i in range(1, n + 1):
        k = main.lock_height(main.maxs[m + i - 1])
        anc = (m + i - 1) >> k
        if active[anc]:
            _fail("(4)", f"leaf {i}: ancestor {anc} at height {k} is active")
    if n and active[(m + n - 1) >> 1]:
        _fail("(5)", f"parent of leaf n = {n} is active")

    # Caches on active internal nodes, recomputed bottom-up.
    items, less = main.items, main.less
    best = [0] * (2 * m)
    latest = list(main.maxs)
    for i in range(1, n + 1):
        best[m + i - 1] = i if items[i] is not INF else 0
        if main.minleaf[m + i - 1] != best[m + i - 1]:
            _fail("cache", f"leaf {i} min handle {main.minleaf[m + i - 1]} != {best[m + i - 1]}")
    for x in range(m - 1, 0, -1):
        if not active[x]:
            continue
        a, b = best[2 * x], best[2 * x + 1]
        if a and b:
            best[x] = b if less(items[b], items[a]) else a
        else:
            best[x] = a or b
        latest[x] = max(latest[2 * x], latest[2 * x + 1])
        if main.minleaf[x] != best[x]:
            _fail("cache", f"node {x} min handle {main.minleaf[x]} != {best[x]}")
        if main.maxs[x] != latest[x]:
            _fail("cache", f"node {x} max access time {main.maxs[x]} != {latest[x]}")
    return leaders


def _check_tree_nodes(tree, main, level: int) -> list[tuple[int, int, int]]:
    less, items = main.less, main.items
    out = []

    def better(a, b):
        if not a:
            return b
        if not b:
            return a
        lo, hi = (a, b) if a < b else (b, a)
        return hi if less(items[hi], items[lo]) else lo

    def walk(x):
        if x is None:
            return 0, 0, 0
        lh, ls, lm = walk(x.left)
        out.append((x.key, x.h, x.val))
        rh, rs, rm = walk(x.right)
        if abs(lh - rh) > 1:
            _fail("index balance", f"L_{level} node {x.key}: subtree heights {lh} and {rh}")
        ht = max(lh, rh) + 1
        size = ls + rs + 1
        mn = better(better(lm, x.val), rm)
        if x.ht != ht or x.size != size:
            _fail("index cache", f"L_{level} node {x.key}: stored (ht, size) = ({x.ht}, {x.size}), actual ({ht}, {size})")
        if x.mn != mn:
            _fail("index cache", f"L_{level} node {x.key}: subtree min {x.mn} != {mn}")
        return ht, size, mn

    walk(tree.root)
    return out


def check_invariants(tree, mode: str = "fast") -> None:
    """Validate ``tree`` (a :class:`~unitopsort.unified_tree.UnifiedTree`).

    ``mode`` is ``"fast"`` or ``"full"``.
    """
    if mode not in ("fast", "full"):
        raise ValueError(f"unknown check mode {mode!r}")
    main, forest = tree.main, tree.forest
    th = forest.thresholds
    leaders = _check_main(main)
    where = {main.leftmost(x): x for x in leaders}

    registered = {}
    for idx, lt in enumerate(forest.trees):
        if lt.level != idx:
            _fail("registry", f"tree at position {idx} claims level {lt.level}")
        entries = _check_tree_nodes(lt, main, idx)
        prev = 0
        for key, h, val in entries:
            if key <= prev:
                _fail("index order", f"L_{idx}: key {key} after {prev}")
            prev = key
            x = where.get(key)
            if x is None or main.height(x) != h:
                _fail("registry", f"L_{idx} entry (key {key}, height {h}) is not a current leader")
            if key in registered:
                _fail("registry", f"leader at leaf {key} stored in L_{registered[key]} and L_{idx}")
            registered[key] = idx
            if tree.level[key] != idx:
                _fail("registry", f"leader at leaf {key} is in L_{idx} but recorded at level {tree.level[key]}")
            if val != main.minleaf[x]:
                _fail("index cache", f"L_{idx} leader {x}: stored min {val} != {main.minleaf[x]}")
            lo, hi = (0, 4) if idx == 0 else (1 << idx, 4 << idx)
            if not lo <= h <= hi:
                _fail("(7)", f"L_{idx} holds leader {x} of height {h} outside [{lo}, {hi}]")
        if lt.size > th.before(idx):
            _fail("(6)", f"|L_{idx}| = {lt.size} exceeds {th.before(idx)}")
        # AVL height bound; well within the O(2^idx) bound the depth argument needs.
        if lt.size and lt.height > 1.4405 * math.log2(lt.size + 2):
            _fail("index height", f"L_{idx} has height {lt.height} for size {lt.size}")
    if len(registered) != len(leaders):
        missing = [x for x in leaders if main.leftmost(x) not in registered]
        _fail("registry", f"leaders {missing[:5]} are in no index tree")

    # (8): unpromoted blocks need a witness of height 2*2^j + 1 or + 2.
    run_level, run_witness, run_start = None, False, None
    for x in leaders + [None]:
        if x is not None:
            h = main.height(x)
            j = registered[main.leftmost(x)]
            unpromoted = h > (2 << j)
        if x is None or not unpromoted or j != run_level:
            if run_level is not None and not run_witness:
                _fail("(8)", f"unpromoted block in L_{run_level} starting at leader {run_start} lacks a witness")
            run_level, run_witness, run_start = None, False, None
            if x is not None and unpromoted:
                run_level, run_start = j, x
        if x is not None and unpromoted:
            run_witness = run_witness or h in ((2 << j) + 1, (2 << j) + 2)

    # Chain of suffix minima and the global minimum.
    items, less = main.items, main.less

    def better(a, b):
        if not a:
            return b
        if not b:
            return a
        lo, hi = (a, b) if a < b else (b, a)
        return hi if less(items[hi], items[lo]) else lo

    below = 0
    for j in range(len(forest.trees) - 1, -1, -1):
        below = better(forest.trees[j].root_min, below)
        if forest.chain[j] != below:
            _fail("chain", f"chain[{j}] = {forest.chain[j]}, expected {below}")
    truth = 0
    for i in range(1, main.n + 1):
        if items[i] is not INF:
            truth = better(truth, i)
    if forest.global_min != truth:
        _fail("chain", f"global min leaf {forest.global_min}, expected {truth}")
    over = {j for j, lt in enumerate(forest.trees) if lt.size > th.before(j)}
    if over != forest.oversized:
        _fail("oversized", f"oversized set {sorted(forest.oversized)} != {sorted(over)}")

    reconcile(tree.ledger, tree, strict=True)

    if mode == "full":
        _check_depths(main)


def _check_depths(main) -> None:
    n, m = main.n, main.m
    s = [None if main.maxs[m + i - 1] == NEVER else main.maxs[m + i - 1] for i in range(1, n + 1)]
    d = d_naive_all(s, main.t)
    if d is None:
        return
    heights = np.array([main.height(_leader(main, i)) for i in range(1, n + 1)])
    bad = np.flatnonzero(heights > d + 3 + 1e-9)
    if bad.size:
        i = int(bad[0]) + 1
        _fail("leader-height", f"leaf {i}: leader height {heights[i - 1]} > d(i) + 3 = {d[i - 1] + 3:.3f}")


def _leader(main, i: int) -> int:
    active = main.active
    x = main.m + i - 1
    while active[x >> 1]:
        x >>= 1
    return x
