"""Complete binary tree over item leaves with active/passive nodes.

Nodes use heap numbering: the root is 1 and node ``x`` has children ``2x``
and ``2x + 1``. With ``m`` leaves, leaf ``i`` (1-based) is node
``m + i - 1``. A node's height is its subtree height (leaves have height
0), so the ``k``-th ancestor of node ``x`` is ``x >> k``.

A *leader* is an active node with a passive parent. Leaders partition the
occupied leaves ``1..n`` into contiguous runs.
"""

from __future__ import annotations

import operator
from typing import Callable, NamedTuple

from .ledger import CostLedger

__all__ = ["INF", "NEVER", "LeaderCursor", "MainTree"]

# Access time of a leaf that was never accessed; below any real clock value
# so that ``(t - NEVER).bit_length()`` exceeds every tree depth.
NEVER = -(1 << 62)


class _Infinity:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return "INF"


INF = _Infinity()
"""Placeholder item larger than everything; never handed to the comparator."""


class LeaderCursor(NamedTuple):
    node: int
    height: int
    leftmost: int


class MainTree:
    """Array-backed main tree with per-node active flags and caches.

    ``minleaf[x]`` holds the leaf index of the minimum item under an active
    node ``x`` (0 when every leaf below holds :data:`INF`); ``maxs[x]`` holds
    the latest access time below it. Both are only meaningful on active
    nodes.
    """

    def __init__(
        self,
        capacity_hint: int = 0,
        less: Callable | None = None,
        ledger: CostLedger | None = None,
    ):
        m = 2
        while m < capacity_hint + 1:
            m <<= 1
        self.m = m
        self.depth = m.bit_length() - 1
        self.n = 0
        self.t = 0
        self.active = bytearray(2 * m)
        self.minleaf = [0] * (2 * m)
        self.maxs = [NEVER] * (2 * m)
        self.items: list = [INF] * (m + 1)
        self.less = less if less is not None else operator.lt
        self.ledger = ledger if ledger is not None else CostLedger()

    # -- geometry -----------------------------------------------------------

    def height(self, x: int) -> int:
        return self.depth + 1 - x.bit_length()

    def leftmost(self, x: int) -> int:
        return (x << (self.depth + 1 - x.bit_length())) - self.m + 1

    def rightmost(self, x: int) -> int:
        return ((x + 1) << (self.depth + 1 - x.bit_length())) - self.m

    def node_at(self, leaf: int, h: int) -> int:
        return (self.m + leaf - 1) >> h

    def leaf_node(self, i: int) -> int:
        return self.m + i - 1

    def cursor(self, x: int) -> LeaderCursor:
        return LeaderCursor(x, self.height(x), self.leftmost(x))

    # -- comparisons --------------------------------------------------------

    def min2(self, a: int, b: int) -> int:
        """Leaf holding the smaller item; 0 means 'no item'.

        Equal items resolve to the lower leaf index, i.e. the earlier push.
        """
        if not a:
            return b
        if not b:
            return a
        led = self.ledger
        led.comparisons += 1
        led.steps += 1
        if a > b:
            a, b = b, a
        items = self.items
        return b if self.less(items[b], items[a]) else a

    # -- leaves -------------------------------------------------------------

    def activate_leaf(self, item) -> int:
        i = self.n + 1
        x = self.m + self.n
        self.active[x] = 1
        self.items[i] = item
        self.minleaf[x] = 0 if item is INF else i
        self.maxs[x] = NEVER
        self.n = i
        self.ledger.steps += 1
        if self.n == self.m:
            self._grow()
        return i

    def _grow(self) -> None:
        """Double ``m``: the old tree becomes the left subtree of a new root."""
        m = self.m
        size = 4 * m
        active = bytearray(size)
        minleaf = [0] * size
        maxs = [NEVER] * size
        # Depth-b nodes [2^b, 2^(b+1)) move to [2^(b+1), 2^(b+1) + 2^b).
        lo = 1
        while lo < 2 * m:
            hi = 2 * lo
            active[hi : hi + lo] = self.active[lo:hi]
            minleaf[hi : hi + lo] = self.minleaf[lo:hi]
            maxs[hi : hi + lo] = self.maxs[lo:hi]
            lo = hi
        self.active, self.minleaf, self.maxs = active, minleaf, maxs
        self.items.extend([INF] * m)
        self.m = 2 * m
        self.depth += 1
        self.ledger.steps += 2 * m

    def set_item(self, i: int, item) -> None:
        self.items[i] = item
        self.minleaf[self.m + i - 1] = 0 if item is INF else i

    def stamp(self, i: int) -> None:
        """Record an access of leaf ``i`` at the current clock and advance it."""
        self.maxs[self.m + i - 1] = self.t
        self.t += 1

    def access_time(self, i: int) -> int:
        return self.maxs[self.m + i - 1]

    def lock_height(self, s: int) -> int:
        """``ceil(log2(1 + t - s))`` capped at the leaf depth."""
        k = (self.t - s).bit_length()
        return k if k < self.depth else self.depth

    # -- leaders ------------------------------------------------------------

    def is_leader(self, x: int) -> bool:
        return bool(self.active[x]) and not self.active[x >> 1]

    def leader_of(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"leaf {i} out of range [1, {self.n}]")
        active = self.active
        x = self.m + i - 1
        steps = 1
        while active[x >> 1]:
            x >>= 1
            steps += 1
        self.ledger.steps += steps
        return x

    def _leader_near(self, j: int, h: int) -> int:
        """Leader containing occupied leaf ``j``, searched from height ``h``."""
        active = self.active
        base = self.m + j - 1
        if h > self.depth:
            h = self.depth
        y = base >> h
        steps = 1
        if active[y]:
            while active[y >> 1]:
                y >>= 1
                steps += 1
        else:
            while not active[y]:
                h -= 1
                y = base >> h
                steps += 1
        self.ledger.steps += steps
        return y

    def next_leader(self, x: int) -> int | None:
        h = self.depth + 1 - x.bit_length()
        r = ((x + 1) << h) - self.m
        if r >= self.n:
            return None
        return self._leader_near(r + 1, h)

    def prev_leader(self, x: int) -> int | None:
        h = self.depth + 1 - x.bit_length()
        left = (x << h) - self.m + 1
        if left <= 1:
            return None
        return self._leader_near(left - 1, h)

    def deactivate(self, x: int) -> tuple[int, int]:
        """Make internal node ``x`` passive; returns its children."""
        if x >= self.m:
            raise ValueError(f"node {x} is a leaf; leaves are never deactivated")
        if not self.active[x]:
            raise ValueError(f"node {x} is already passive")
        self.active[x] = 0
        self.ledger.steps += 1
        return (2 * x, 2 * x + 1)

    def activate(self, p: int) -> None:
        """Make ``p`` active over two active children, filling its caches."""
        a, b = 2 * p, 2 * p + 1
        self.active[p] = 1
        self.minleaf[p] = self.min2(self.minleaf[a], self.minleaf[b])
        ma, mb = self.maxs[a], self.maxs[b]
        self.maxs[p] = ma if ma > mb else mb
        self.ledger.steps += 1

    def activation_blocker(self, p: int) -> str | None:
        """Which of the access-time or last-leaf invariants activating ``p`` breaks."""
        h = self.depth + 1 - p.bit_length()
        if p <= 1:
            return "root"
        ma, mb = self.maxs[2 * p], self.maxs[2 * p + 1]
        if self.lock_height(ma if ma > mb else mb) <= h:
            return "(4)"
        if h == 1 and self.n and p == (self.m + self.n - 1) >> 1:
            return "(5)"
        return None

    def recompute_min_path(self, i: int) -> int:
        """Refresh minima from leaf ``i`` up to its leader; returns the leader."""
        active = self.active
        minleaf = self.minleaf
        x = self.m + i - 1
        steps = 1
        while active[x >> 1]:
            x >>= 1
            minleaf[x] = self.min2(minleaf[2 * x], minleaf[2 * x + 1])
            steps += 1
        self.ledger.steps += steps
        return x

    def leaders(self) -> list[int]:
        """All leaders left to right, by a sweep over the leaves (O(n))."""
        out = []
        i = 1
        active = self.active
        while i <= self.n:
            x = self.m + i - 1
            while active[x >> 1]:
                x >>= 1
            out.append(x)
            i = self.rightmost(x) + 1
        return out

    def dump(self) -> str:
        """One line per node: ``idx height active min_leaf max_s``."""
        lines = []
        for x in range(1, 2 * self.m):
            s = self.maxs[x]
            lines.append(
                f"{x} {self.height(x)} {self.active[x]} {self.minleaf[x]} "
                f"{'never' if s == NEVER else s}"
            )
        return "\n".join(lines) + "\n"
