"""Brute-force ground truth for the tests.

Nothing here shares code with the structures it checks: linear extensions
are counted by a downset DP and enumerated by backtracking, depth budgets
and unified-bound terms are exact minima over direct scans, and heap
behaviour is compared against :mod:`heapq`.
"""

from __future__ import annotations

import heapq
import math
from typing import Iterable, Sequence

import numpy as np

from .graph import Dag

__all__ = [
    "NEVER",
    "count_linear_extensions",
    "d_naive",
    "d_naive_all",
    "enumerate_linear_extensions",
    "log2_extensions",
    "reference_heap_replay",
    "unified_bound_terms",
    "working_set_terms",
]

COUNT_LIMIT = 24
ENUM_LIMIT = 10

# Marker for a leaf that was never accessed; any real access time is larger.
NEVER = None


def _pred_masks(g: Dag) -> list[int]:
    masks = [0] * g.n
    for u, v in g.edges:
        masks[v - 1] |= 1 << (u - 1)
    return masks


def count_linear_extensions(g: Dag) -> int:
    """Exact e(G) by DP over downsets, one popcount layer at a time.

    ``f(S ∪ {v}) += f(S)`` whenever all predecessors of ``v`` lie in the
    downset ``S``.
    """
    n = g.n
    if n > COUNT_LIMIT:
        raise ValueError(f"n = {n} exceeds the exact counting limit {COUNT_LIMIT}")
    if n == 0:
        return 1
    preds = np.array(_pred_masks(g), dtype=np.int64)
    # 20! < 2**63, so int64 accumulators are exact up to n = 20.
    dtype = np.int64 if n <= 20 else object
    masks = np.zeros(1, dtype=np.int64)
    counts = np.ones(1, dtype=dtype)
    for _ in range(n):
        new_masks = []
        new_counts = []
        for v in range(n):
            bit = np.int64(1 << v)
            sel = ((masks & preds[v]) == preds[v]) & ((masks & bit) == 0)
            if sel.any():
                new_masks.append(masks[sel] | bit)
                new_counts.append(counts[sel])
        masks = np.concatenate(new_masks)
        counts = np.concatenate(new_counts)
        order = np.argsort(masks, kind="stable")
        masks, counts = masks[order], counts[order]
        starts = np.flatnonzero(np.r_[True, masks[1:] != masks[:-1]])
        counts = np.add.reduceat(counts, starts)
        masks = masks[starts]
    return int(counts[0])


def log2_extensions(g: Dag) -> float:
    return math.log2(count_linear_extensions(g))


def enumerate_linear_extensions(g: Dag) -> list[list[int]]:
    """All compatible orders, lexicographically, by source-picking backtracking."""
    n = g.n
    if n > ENUM_LIMIT:
        raise ValueError(f"n = {n} exceeds the enumeration limit {ENUM_LIMIT}")
    indeg = [0] * (n + 1)
    for _, v in g.edges:
        indeg[v] += 1
    out: list[list[int]] = []
    prefix: list[int] = []
    used = [False] * (n + 1)

    def rec():
        if len(prefix) == n:
            out.append(list(prefix))
            return
        for v in range(1, n + 1):
            if not used[v] and indeg[v] == 0:
                used[v] = True
                prefix.append(v)
                for w in g.out_adj[v]:
                    indeg[w] -= 1
                rec()
                for w in g.out_adj[v]:
                    indeg[w] += 1
                prefix.pop()
                used[v] = False

    rec()
    return out


def d_naive(s: Sequence, t: int, i: int) -> float | None:
    """Depth budget ``1 + min_j log2(1 + |i - j|) + log2(1 + t - s(j))``.

    ``s[j - 1]`` is leaf ``j``'s last access time or :data:`NEVER`;
    never-accessed leaves are skipped. Returns ``None`` if no leaf was
    ever accessed.
    """
    best = math.inf
    for j, sj in enumerate(s, 1):
        if sj is NEVER:
            continue
        val = math.log2(1 + abs(i - j)) + math.log2(1 + t - sj)
        if val < best:
            best = val
    return None if best == math.inf else 1.0 + best


def d_naive_all(s: Sequence, t: int) -> np.ndarray | None:
    """Vectorised :func:`d_naive` for every leaf ``1..n`` at once."""
    acc = np.array([j for j, sj in enumerate(s) if sj is not NEVER], dtype=np.int64)
    if acc.size == 0:
        return None
    n = len(s)
    times = np.array([s[j] for j in acc], dtype=np.float64)
    col = np.log2(1.0 + t - times)
    idx = np.arange(n)[:, None]
    dist = np.log2(1.0 + np.abs(idx - acc[None, :]))
    return 1.0 + (dist + col[None, :]).min(axis=1)


def _replay_ranks(trace: Iterable[tuple]) -> list[tuple[int, int, int]]:
    """Return ``(a, b, pushes_so_far)`` for each pop, using a binary heap."""
    heap: list = []
    pushes = 0
    out = []
    for op in trace:
        if op[0] == "push":
            pushes += 1
            heapq.heappush(heap, (op[1], pushes))
        else:
            if not heap:
                raise IndexError("pop from empty heap in trace")
            _, a = heapq.heappop(heap)
            out.append((a, len(out) + 1, pushes))
    return out


def unified_bound_terms(trace: Iterable[tuple]) -> list[float]:
    """Per-pop unified-bound budgets for a ``("push", key)`` / ``("pop",)`` trace.

    Budget of the first pop is 1; for later pops it is the exact minimum over
    previously popped ``y`` of ``1 + log2|a(x) - a(y)| + log2(b(x) - b(y))``.
    Ties between equal keys go to the earlier push.

    The previous pop gives a candidate ``c``; any ``y`` popped more than
    ``2**c`` pops earlier has a larger term, so only that window is scanned.
    """
    ranks = _replay_ranks(trace)
    out = []
    a_seen = np.zeros(len(ranks), dtype=np.float64)
    for k, (a, b, _) in enumerate(ranks):
        if k == 0:
            out.append(1.0)
        else:
            cand = math.log2(abs(a - a_seen[k - 1]))
            width = min(k, int(2.0**cand) + 1)
            prev_a = a_seen[k - width : k]
            prev_b = np.arange(k - width + 1, k + 1, dtype=np.float64)
            terms = np.log2(np.abs(a - prev_a)) + np.log2(b - prev_b)
            out.append(1.0 + float(terms.min()))
        a_seen[k] = a
    return out


def working_set_terms(trace: Iterable[tuple]) -> list[float]:
    """Per-pop ``1 + log2(1 + t - a(x))`` with ``t`` = pushes so far."""
    return [1.0 + math.log2(1 + t - a) for a, _, t in _replay_ranks(trace)]


def reference_heap_replay(trace: Iterable[tuple], key=None) -> list:
    """Pop results of a textbook binary heap; equal keys pop in push order.

    Items are ordered by ``key(item)`` (the item itself by default) and
    returned as pushed, so ties stay observable.
    """
    heap: list = []
    seq = 0
    out = []
    for op in trace:
        if op[0] == "push":
            seq += 1
            item = op[1]
            heapq.heappush(heap, (item if key is None else key(item), seq, item))
        else:
            if not heap:
                raise IndexError("pop from empty heap in trace")
            out.append(heapq.heappop(heap)[2])
    return out
