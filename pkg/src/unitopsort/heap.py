"""Priority queue whose pops cost the unified bound.

The ``k``-th pushed item lives at leaf ``k`` of a :class:`UnifiedTree`.
``pop`` accesses the minimum's leaf and then empties it with the
:data:`INF` sentinel, so emptied leaves never reach the comparator.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .index_forest import PRODUCTION, Thresholds
from .ledger import CostLedger
from .main_tree import INF
from .unified_tree import UnifiedTree

__all__ = ["UnifiedHeap"]


class UnifiedHeap:
    """Min-heap; equal items pop in push order.

    ``less(a, b)`` is a strict weak order on items (``<`` by default).
    ``pop_log[k]`` is the leaf, i.e. the 1-indexed push rank, of the
    ``(k + 1)``-th popped item.
    """

    def __init__(
        self,
        items: Iterable = (),
        less: Callable | None = None,
        *,
        thresholds: Thresholds = PRODUCTION,
        debug: bool = False,
        capacity_hint: int = 0,
        ledger: CostLedger | None = None,
    ):
        self.tree = UnifiedTree(capacity_hint, less, thresholds=thresholds, debug=debug, ledger=ledger)
        self.pushes = 0
        self.pops = 0
        self.pop_log: list[int] = []
        for x in items:
            self.push(x)

    @property
    def ledger(self) -> CostLedger:
        return self.tree.ledger

    def __len__(self) -> int:
        return self.pushes - self.pops

    def __bool__(self) -> bool:
        return self.pushes > self.pops

    def push(self, item) -> None:
        if item is INF:
            raise ValueError("the INF sentinel cannot be pushed")
        self.tree.add_leaf(item)
        self.pushes += 1

    def peek(self):
        leaf = self.tree.global_min()
        if leaf is None:
            raise IndexError("peek at empty heap")
        return self.tree.item(leaf)

    def pop(self):
        """Remove and return the minimum item."""
        tree = self.tree
        leaf = tree.global_min()
        if leaf is None:
            raise IndexError("pop from empty heap")
        item = tree.item(leaf)
        tree.access(leaf)
        tree.change_key(leaf, INF)
        self.pops += 1
        self.pop_log.append(leaf)
        return item

    def pop_ranks(self) -> list[tuple[int, int]]:
        """``(a, b)`` per popped item, in pop order."""
        return [(a, b) for b, a in enumerate(self.pop_log, 1)]
