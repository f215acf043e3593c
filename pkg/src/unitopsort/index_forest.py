"""Index trees over leaders: join-based AVL trees with subtree minima.

Each :class:`IndexTree` stores leaders keyed by the index of their leftmost
leaf, which is strictly increasing left to right and does not change when
the main tree doubles. Every node keeps its subtree size and the leaf
holding its subtree's minimum item. Bulk insertion and deletion of a
presorted contiguous run cost ``O(k + log S)`` via split / build / join.

:class:`IndexForest` holds the trees ``L_0, L_1, ...`` and the suffix
minima ``chain[j] = min(root(L_j), chain[j + 1])``, so ``chain[0]`` is the
global minimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .ledger import CostLedger

__all__ = [
    "DESK",
    "PRESETS",
    "PRODUCTION",
    "SATURATED",
    "SCALED",
    "IndexForest",
    "IndexTree",
    "Thresholds",
    "level_for_height",
    "threshold",
]

SATURATED = 1 << 62
"""Stand-in for thresholds too large for any feasible structure."""


@dataclass(frozen=True)
class Thresholds:
    """Size limits ``c * 4**e(i)`` for index tree ``L_i``.

    ``before`` bounds sizes at rest, ``after`` bounds them right after an
    insertion or access, and ``target`` is what a cleanup step aims for.
    Production uses ``e(i) = 2**(i + 2)``; the scaled variant uses
    ``e(i) = i + offset`` so that cascades happen at desk scale.
    """

    before_c: int = 20
    after_c: int = 23
    target_c: int = 16
    scaled: bool = False
    offset: int = 2

    def exponent(self, i: int) -> int:
        return i + self.offset if self.scaled else 1 << (i + 2)

    def _value(self, c: int, i: int) -> int:
        e = self.exponent(i)
        if 2 * e + c.bit_length() > 62:
            return SATURATED
        return c << (2 * e)

    def before(self, i: int) -> int:
        return self._value(self.before_c, i)

    def after(self, i: int) -> int:
        return self._value(self.after_c, i)

    def target(self, i: int) -> int:
        return self._value(self.target_c, i)


PRODUCTION = Thresholds()
SCALED = Thresholds(scaled=True)
# Smallest scale at which cleanup fires below 256 leaves (L_0 limit 80).
DESK = Thresholds(scaled=True, offset=1)
PRESETS = {"production": PRODUCTION, "scaled": SCALED, "desk": DESK}


def threshold(i: int, thresholds: Thresholds = PRODUCTION) -> int:
    if i < 0:
        raise ValueError("level must be non-negative")
    return thresholds.before(i)


def level_for_height(h: int) -> int:
    """Index tree for a leader of main-tree height ``h`` ([0, 4] -> 0, (2*2^j, 4*2^j] -> j)."""
    return 0 if h <= 4 else (h - 1).bit_length() - 2


class _Node:
    __slots__ = ("key", "h", "val", "left", "right", "ht", "size", "mn")

    def __init__(self, key: int, h: int, val: int):
        self.key = key
        self.h = h
        self.val = val
        self.left = None
        self.right = None
        self.ht = 1
        self.size = 1
        self.mn = val


def _ht(x) -> int:
    return x.ht if x is not None else 0


class IndexTree:
    """Balanced search tree of leaders at one level.

    ``min2(a, b)`` returns whichever of two leaf handles holds the smaller
    item (0 = no item) and is where comparisons are charged.
    """

    def __init__(self, level: int, min2: Callable[[int, int], int], ledger: CostLedger):
        self.level = level
        self.root: _Node | None = None
        self.min2 = min2
        self.ledger = ledger

    # -- basic accessors ----------------------------------------------------

    @property
    def size(self) -> int:
        return self.root.size if self.root is not None else 0

    def __len__(self) -> int:
        return self.size

    @property
    def height(self) -> int:
        return _ht(self.root)

    @property
    def root_min(self) -> int:
        return self.root.mn if self.root is not None else 0

    def entries(self) -> list[tuple[int, int, int]]:
        """In-order ``(key, height, val)`` triples."""
        out = []
        stack = []
        x = self.root
        while stack or x is not None:
            while x is not None:
                stack.append(x)
                x = x.left
            x = stack.pop()
            out.append((x.key, x.h, x.val))
            x = x.right
        self.ledger.steps += len(out)
        return out

    def keys(self) -> list[int]:
        return [e[0] for e in self.entries()]

    def nodes(self) -> Iterator[_Node]:
        stack = []
        x = self.root
        while stack or x is not None:
            while x is not None:
                stack.append(x)
                x = x.left
            x = stack.pop()
            yield x
            x = x.right

    # -- structural primitives ---------------------------------------------

    def _update(self, x: _Node) -> None:
        l, r = x.left, x.right
        lh = l.ht if l is not None else 0
        rh = r.ht if r is not None else 0
        x.ht = (lh if lh > rh else rh) + 1
        mn = x.val
        size = 1
        min2 = self.min2
        if l is not None:
            size += l.size
            mn = min2(l.mn, mn)
        if r is not None:
            size += r.size
            mn = min2(mn, r.mn)
        x.size = size
        x.mn = mn
        self.ledger.steps += 1

    def _rot_left(self, x: _Node) -> _Node:
        y = x.right
        x.right = y.left
        y.left = x
        self._update(x)
        self._update(y)
        return y

    def _rot_right(self, x: _Node) -> _Node:
        y = x.left
        x.left = y.right
        y.right = x
        self._update(x)
        self._update(y)
        return y

    def _join_right(self, tl: _Node, k: _Node, tr):
        l, c = tl.left, tl.right
        if _ht(c) <= _ht(tr) + 1:
            k.left, k.right = c, tr
            self._update(k)
            if k.ht <= _ht(l) + 1:
                tl.right = k
                self._update(tl)
                return tl
            tl.right = self._rot_right(k)
            self._update(tl)
            return self._rot_left(tl)
        t2 = self._join_right(c, k, tr)
        tl.right = t2
        self._update(tl)
        if t2.ht <= _ht(l) + 1:
            return tl
        return self._rot_left(tl)

    def _join_left(self, tl, k: _Node, tr: _Node):
        c, r = tr.left, tr.right
        if _ht(c) <= _ht(tl) + 1:
            k.left, k.right = tl, c
            self._update(k)
            if k.ht <= _ht(r) + 1:
                tr.left = k
                self._update(tr)
                return tr
            tr.left = self._rot_left(k)
            self._update(tr)
            return self._rot_right(tr)
        t2 = self._join_left(tl, k, c)
        tr.left = t2
        self._update(tr)
        if t2.ht <= _ht(r) + 1:
            return tr
        return self._rot_right(tr)

    def _join(self, tl, k: _Node, tr):
        """Join ``tl < k < tr`` into one AVL tree; ``k`` is reused as a node."""
        hl, hr = _ht(tl), _ht(tr)
        if hl > hr + 1:
            return self._join_right(tl, k, tr)
        if hr > hl + 1:
            return self._join_left(tl, k, tr)
        k.left, k.right = tl, tr
        self._update(k)
        return k

    def _split(self, x, key: int):
        """Split into keys ``< key`` and keys ``>= key``."""
        if x is None:
            return None, None
        self.ledger.steps += 1
        l, r = x.left, x.right
        if key <= x.key:
            a, b = self._split(l, key)
            return a, self._join(b, x, r)
        a, b = self._split(r, key)
        return self._join(l, x, a), b

    def _split_last(self, x: _Node):
        if x.right is None:
            l = x.left
            x.left = None
            self.ledger.steps += 1
            return l, x
        rest, last = self._split_last(x.right)
        return self._join(x.left, x, rest), last

    def _join2(self, tl, tr):
        if tl is None:
            return tr
        if tr is None:
            return tl
        rest, last = self._split_last(tl)
        return self._join(rest, last, tr)

    def _build(self, entries, lo: int, hi: int):
        if lo >= hi:
            return None
        mid = (lo + hi) >> 1
        key, h, val = entries[mid]
        x = _Node(key, h, val)
        x.left = self._build(entries, lo, mid)
        x.right = self._build(entries, mid + 1, hi)
        self._update(x)
        return x

    # -- bulk operations ----------------------------------------------------

    def rebuild(self, entries: list[tuple[int, int, int]]) -> None:
        """Replace the contents by presorted entries in linear time."""
        self.root = self._build(entries, 0, len(entries))

    def bulk_insert(self, entries: list[tuple[int, int, int]]) -> None:
        """Insert a presorted run whose key range holds no current key."""
        if not entries:
            return
        lo_key, hi_key = entries[0][0], entries[-1][0]
        last = self.root
        while last is not None and last.right is not None:
            last = last.right
        self.ledger.steps += self.height
        if last is None or last.key < lo_key:
            # Appending past the current maximum needs no split.
            a, b = self.root, None
        else:
            a, b = self._split(self.root, lo_key)
            if b is not None:
                first = b
                while first.left is not None:
                    first = first.left
                if first.key <= hi_key:
                    self.root = self._join2(a, b)
                    raise KeyError(f"level {self.level}: key {first.key} collides with inserted run [{lo_key}, {hi_key}]")
        head = _Node(*entries[0])
        if len(entries) == 1:
            self.root = self._join(a, head, b)
            return
        tail = _Node(*entries[-1])
        mid = self._build(entries, 1, len(entries) - 1)
        self.root = self._join(self._join(a, head, mid), tail, b)

    def bulk_delete(self, lo_key: int, hi_key: int) -> int:
        """Delete all keys in ``[lo_key, hi_key]``; returns how many went."""
        if self.root is None or lo_key > hi_key:
            return 0
        a, rest = self._split(self.root, lo_key)
        mid, b = self._split(rest, hi_key + 1)
        self.root = self._join2(a, b)
        return mid.size if mid is not None else 0

    def update_val(self, key: int, val: int) -> None:
        """Set the stored minimum of leader ``key`` and refresh the root path."""
        path = []
        x = self.root
        while x is not None and x.key != key:
            path.append(x)
            x = x.left if key < x.key else x.right
        if x is None:
            raise KeyError(f"level {self.level}: key {key} not present")
        x.val = val
        min2 = self.min2
        path.append(x)
        for y in reversed(path):
            mn = y.val
            if y.left is not None:
                mn = min2(y.left.mn, mn)
            if y.right is not None:
                mn = min2(mn, y.right.mn)
            y.mn = mn
        self.ledger.steps += len(path)

    def find(self, key: int) -> _Node | None:
        x = self.root
        while x is not None and x.key != key:
            x = x.left if key < x.key else x.right
        return x


class IndexForest:
    """Trees ``L_0..L_K`` plus chained suffix minima and an oversize set."""

    def __init__(
        self,
        min2: Callable[[int, int], int],
        ledger: CostLedger,
        thresholds: Thresholds = PRODUCTION,
    ):
        self.min2 = min2
        self.ledger = ledger
        self.thresholds = thresholds
        self.trees: list[IndexTree] = []
        self.chain: list[int] = []
        self.oversized: set[int] = set()

    def tree(self, j: int) -> IndexTree:
        while len(self.trees) <= j:
            self.trees.append(IndexTree(len(self.trees), self.min2, self.ledger))
            self.chain.append(0)
        return self.trees[j]

    def sizes(self) -> list[int]:
        return [t.size for t in self.trees]

    def refresh_chain(self, j: int) -> None:
        """Recompute ``chain[j], ..., chain[0]`` after ``L_j``'s root minimum changed."""
        trees, chain, min2 = self.trees, self.chain, self.min2
        top = len(trees) - 1
        if j > top:
            j = top
        below = chain[j + 1] if j + 1 <= top else 0
        for k in range(j, -1, -1):
            below = min2(trees[k].root_min, below)
            chain[k] = below
        self.ledger.steps += j + 1

    @property
    def global_min(self) -> int:
        return self.chain[0] if self.chain else 0

    def note_size(self, j: int) -> None:
        if self.trees[j].size > self.thresholds.before(j):
            self.oversized.add(j)
        else:
            self.oversized.discard(j)

    def dump(self) -> str:
        """One line per tree: ``level size height min``."""
        return "".join(f"{t.level} {t.size} {t.height} {t.root_min}\n" for t in self.trees)


def iter_runs(items: Iterable, same_run: Callable) -> Iterator[list]:
    run: list = []
    for x in items:
        if run and not same_run(run[-1], x):
            yield run
            run = []
        run.append(x)
    if run:
        yield run
