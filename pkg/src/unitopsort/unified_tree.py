"""The composed structure: main tree plus index forest.

Supports ``add_leaf``, ``access``, ``change_key`` and ``global_min`` such
that every leaf ``i`` sits at depth ``O(d(i))`` where

    d(i) = 1 + min_j log2(1 + |i - j|) + log2(1 + t - s(j)).

Leaders live in index tree ``L_j`` where ``j`` is recorded per leader in
:attr:`UnifiedTree.level`, keyed by the leader's leftmost leaf. A leader in
``L_j`` is *unpromoted* when its height exceeds ``2 * 2**j``.

With ``debug=True`` each operation also asserts the contiguity and
monotonicity properties of newly created leaders during ``access`` and
the post-cleanup size bounds, raising :class:`InvariantViolation`.
"""

from __future__ import annotations

import heapq
from collections import Counter
from typing import Callable

from .checks import InvariantViolation
from .index_forest import PRODUCTION, IndexForest, Thresholds, level_for_height
from .ledger import CostLedger, bills_of
from .main_tree import INF, MainTree

__all__ = ["INF", "UnifiedTree"]


def _bill(a: int, b: int) -> int:
    d = a - b if a > b else b - a
    return d - 1 if d > 1 else 0


def _coins(h: int, level: int) -> int:
    return 3 if h > (2 << level) else 2


class UnifiedTree:
    def __init__(
        self,
        capacity_hint: int = 0,
        less: Callable | None = None,
        *,
        thresholds: Thresholds = PRODUCTION,
        debug: bool = False,
        ledger: CostLedger | None = None,
    ):
        self.ledger = ledger if ledger is not None else CostLedger()
        self.main = MainTree(capacity_hint, less, self.ledger)
        self.forest = IndexForest(self.main.min2, self.ledger, thresholds)
        self.forest.tree(0)
        self.level = [0] * (self.main.m + 1)
        self.debug = debug
        self.stats: Counter = Counter()

    # -- queries ------------------------------------------------------------

    @property
    def n(self) -> int:
        return self.main.n

    @property
    def t(self) -> int:
        return self.main.t

    @property
    def thresholds(self) -> Thresholds:
        return self.forest.thresholds

    def item(self, i: int):
        return self.main.items[i]

    def global_min(self) -> int | None:
        """Leaf holding the smallest item, or ``None`` if every leaf holds :data:`INF`."""
        return self.forest.global_min or None

    def leader_level(self, x: int) -> int:
        return self.level[self.main.leftmost(x)]

    def money(self) -> tuple[int, int]:
        """Coins and bills recomputed from the current leaders."""
        main = self.main
        coins = 0
        heights = []
        for x in main.leaders():
            h = main.height(x)
            coins += _coins(h, self.level[main.leftmost(x)])
            heights.append(h)
        return coins, bills_of(heights)

    def depth_of(self, i: int) -> int:
        """Conceptual depth of leaf ``i``: chain position + index-tree height + leader height."""
        x = self.main.leader_of(i)
        j = self.leader_level(x)
        return j + 1 + self.forest.trees[j].height + self.main.height(x)

    # -- helpers ------------------------------------------------------------

    def _sync_level_array(self) -> None:
        need = self.main.m + 1
        if len(self.level) < need:
            self.level.extend([0] * (need - len(self.level)))

    def _check_sizes(self, bound: str, where: str) -> None:
        th = self.forest.thresholds
        for tree in self.forest.trees:
            limit = th.before(tree.level) if bound == "before" else th.after(tree.level)
            if tree.size > limit:
                raise InvariantViolation(
                    "(6)", f"{where}: |L_{tree.level}| = {tree.size} exceeds {bound}-bound {limit}"
                )

    # -- operations ---------------------------------------------------------

    def add_leaf(self, item) -> int:
        """Append a leaf holding ``item``; returns its index."""
        main = self.main
        if self.debug:
            self._check_sizes("before", "add_leaf entry")
        i = main.activate_leaf(item)
        self._sync_level_array()
        x = main.leaf_node(i)
        prev = main.prev_leader(x)
        self.ledger.adjust(2, 0 if prev is None else _bill(main.height(prev), 0))
        self.level[i] = 0
        self.forest.trees[0].bulk_insert([(i, 0, main.minleaf[x])])
        self.forest.refresh_chain(0)
        self.forest.note_size(0)
        if self.debug:
            self._check_sizes("after", "add_leaf")
        self.cleanup()
        return i

    def access(self, i: int) -> None:
        """Mark leaf ``i`` as accessed now, reshaping leaders around it."""
        main = self.main
        if not 1 <= i <= main.n:
            raise IndexError(f"leaf {i} out of range [1, {main.n}]")
        if self.debug:
            self._check_sizes("before", "access entry")
        w = main.leader_of(i)
        if w >= main.m:
            main.stamp(i)
            self.stats["access_leaf_leader"] += 1
            self.cleanup()
            return

        height = main.height
        leftmost = main.leftmost
        level = self.level
        leaf = main.leaf_node(i)

        # Phase 1: main tree only.
        w_level = level[leftmost(w)]
        lefts: list[int] = []
        rights: list[int] = []
        x = w
        for k in range(height(w) - 1, -1, -1):
            main.deactivate(x)
            child = leaf >> k
            if child & 1:
                lefts.append(child ^ 1)
            else:
                rights.append(child ^ 1)
            x = child

        new_left, gone_left, ln = self._settle_left(lefts, leaf)
        new_right, gone_right, rn = self._settle_right(rights, leaf)

        destroyed = [g for g in reversed(gone_left)] + [(w, w_level)] + gone_right
        created = new_left[::-1] + [leaf] + new_right

        # Money: local deltas over the replaced stretch and its fixed neighbours.
        old_h = [height(x) for x, _ in destroyed]
        new_h = [height(x) for x in created]
        edge_l = [height(ln)] if ln is not None else []
        edge_r = [height(rn)] if rn is not None else []
        d_bills = bills_of(edge_l + new_h + edge_r) - bills_of(edge_l + old_h + edge_r)
        d_coins = sum(_coins(h, level_for_height(h)) for h in new_h) - sum(
            _coins(height(x), j) for x, j in destroyed
        )
        self.ledger.adjust(d_coins, d_bills)

        if self.debug:
            self._check_new_leaders(destroyed, created, new_h, len(new_left))

        # Phase 2: index trees.
        forest = self.forest
        spans: dict[int, list[int]] = {}
        for x, j in destroyed:
            key = leftmost(x)
            span = spans.get(j)
            if span is None:
                spans[j] = [key, key, 1]
            else:
                span[1] = key
                span[2] += 1
        for j, (lo, hi, count) in spans.items():
            removed = forest.trees[j].bulk_delete(lo, hi)
            if removed != count:
                raise InvariantViolation(
                    "registry", f"access({i}): removed {removed} of {count} leaders from L_{j}"
                )
        runs: dict[int, list[tuple[int, int, int]]] = {}
        minleaf = main.minleaf
        for x, h in zip(created, new_h):
            j = level_for_height(h)
            key = leftmost(x)
            level[key] = j
            runs.setdefault(j, []).append((key, h, minleaf[x]))
        touched = set(spans) | set(runs)
        for j, run in runs.items():
            forest.tree(j).bulk_insert(run)
        forest.refresh_chain(max(touched))
        for j in touched:
            forest.note_size(j)
        self.stats["access"] += 1
        self.stats["created_leaders"] += len(created)

        if self.debug:
            self._check_sizes("after", f"access({i})")
        main.stamp(i)
        self.cleanup()

    def _settle_left(self, stack: list[int], leaf: int):
        """Split tall leaders left of the accessed leaf until heights step by at most 2.

        ``stack`` holds candidates with the one nearest the leaf on top.
        Returns finished leaders (nearest first), destroyed old leaders
        (nearest first, with their levels) and the surviving old neighbour.
        """
        main = self.main
        height = main.height
        done: list[int] = []
        gone: list[tuple[int, int]] = []
        right_h = 0
        while True:
            while stack:
                u = stack.pop()
                hu = height(u)
                if hu - right_h >= 3:
                    main.deactivate(u)
                    main.deactivate(2 * u + 1)
                    stack.extend((2 * u, 4 * u + 2, 4 * u + 3))
                else:
                    done.append(u)
                    right_h = hu
            ln = main.prev_leader(done[-1] if done else leaf)
            if ln is None:
                return done, gone, None
            hl = height(ln)
            if hl - right_h >= 3:
                gone.append((ln, self.level[main.leftmost(ln)]))
                main.deactivate(ln)
                main.deactivate(2 * ln + 1)
                stack.extend((2 * ln, 4 * ln + 2, 4 * ln + 3))
                continue
            if right_h - hl >= 3:
                raise InvariantViolation("(3)", f"old leader {ln} of height {hl} sits below new height {right_h}")
            return done, gone, ln

    def _settle_right(self, stack: list[int], leaf: int):
        main = self.main
        height = main.height
        done: list[int] = []
        gone: list[tuple[int, int]] = []
        left_h = 0
        while True:
            while stack:
                v = stack.pop()
                hv = height(v)
                if hv - left_h >= 3:
                    main.deactivate(v)
                    main.deactivate(2 * v)
                    stack.extend((2 * v + 1, 4 * v + 1, 4 * v))
                else:
                    done.append(v)
                    left_h = hv
            rn = main.next_leader(done[-1] if done else leaf)
            if rn is None:
                return done, gone, None
            hr = height(rn)
            if hr - left_h >= 3:
                gone.append((rn, self.level[main.leftmost(rn)]))
                main.deactivate(rn)
                main.deactivate(2 * rn)
                stack.extend((2 * rn + 1, 4 * rn + 1, 4 * rn))
                continue
            if left_h - hr >= 3:
                raise InvariantViolation("(3)", f"old leader {rn} of height {hr} sits below new height {left_h}")
            return done, gone, rn

    def _check_new_leaders(self, destroyed, created, heights, n_left) -> None:
        main = self.main
        for a, b in zip(created, created[1:]):
            if main.rightmost(a) + 1 != main.leftmost(b):
                raise InvariantViolation("new-leader-tiling", f"new leaders {a} and {b} are not adjacent")
        if main.leftmost(created[0]) != main.leftmost(destroyed[0][0]) or main.rightmost(
            created[-1]
        ) != main.rightmost(destroyed[-1][0]):
            raise InvariantViolation("new-leader-tiling", "new leaders do not tile the destroyed span")
        left = heights[: n_left + 1]
        right = heights[n_left:]
        if any(a < b for a, b in zip(left, left[1:])) or any(a > b for a, b in zip(right, right[1:])):
            raise InvariantViolation("new-leader-shape", f"new leader heights not monotone: {heights}")
        for a, b, c in zip(heights, heights[1:], heights[2:]):
            if a == b == c:
                raise InvariantViolation("new-leader-shape", f"three consecutive new leaders share height {a}")

    def change_key(self, i: int, item) -> None:
        """Replace the item at leaf ``i`` (``INF`` empties it)."""
        main = self.main
        if not 1 <= i <= main.n:
            raise IndexError(f"leaf {i} out of range [1, {main.n}]")
        main.set_item(i, item)
        x = main.recompute_min_path(i)
        key = main.leftmost(x)
        j = self.level[key]
        self.forest.trees[j].update_val(key, main.minleaf[x])
        self.forest.refresh_chain(j)

    # -- cleanup ------------------------------------------------------------

    def cleanup(self) -> None:
        """Run cleanup steps on the highest oversized level until none is left."""
        forest = self.forest
        while forest.oversized:
            i = max(forest.oversized)
            activated, promoted = self.cleanup_step(i)
            if activated == 0 and promoted == 0:
                # Nothing can shrink L_i; more steps would loop forever.
                self.stats["stalled_cleanups"] += 1
                return

    def cleanup_step(self, i: int) -> tuple[int, int]:
        """Shrink ``L_0..L_i`` by promoting blocks and activating parents.

        Returns ``(activations, promoted leaders)``.
        """
        main, forest, level = self.main, self.forest, self.level
        height, leftmost = main.height, main.leftmost
        ledger = self.ledger
        half, big = 2 << i, 4 << i
        forest.tree(i + 1)

        # (a) All leaders of L_0..L_i in left-to-right order.
        entries = list(heapq.merge(*(forest.trees[j].entries() for j in range(i + 1))))
        coins_before = sum(_coins(h, level[key]) for key, h, _ in entries)

        # (b) Unpromoted blocks holding a leader of maximal height go up a level.
        rest: list[tuple[int, int, int]] = []
        promoted: list[list[tuple[int, int, int]]] = []
        run: list[tuple[int, int, int]] = []
        run_hits = False
        for e in entries:
            key, h, _ = e
            if h > half:
                if run and run[-1][0] + (1 << run[-1][1]) == key:
                    run.append(e)
                    run_hits = run_hits or h == big
                    continue
                if run:
                    (promoted.append if run_hits else rest.extend)(run)
                run, run_hits = [e], h == big
            else:
                if run:
                    (promoted.append if run_hits else rest.extend)(run)
                    run, run_hits = [], False
                rest.append(e)
        if run:
            (promoted.append if run_hits else rest.extend)(run)
        if promoted:
            # Blocks can only split ``rest`` into sorted pieces; restore order.
            rest.sort()
        ledger.steps += len(entries)

        # (c) Activation scan with a backtracking pointer over a linked list.
        nodes = [main.node_at(key, h) for key, h, _ in rest]
        size = len(nodes)
        nxt = list(range(1, size + 1))
        prv = list(range(-1, size - 1))
        if size:
            nxt[-1] = -1
        activations = 0
        ptr = -1  # -1 is the head sentinel
        while True:
            u = (0 if size else -1) if ptr == -1 else nxt[ptr]
            if u == -1:
                break
            v = nxt[u]
            if v == -1:
                break
            ledger.steps += 1
            a, b = nodes[u], nodes[v]
            ok = False
            if not a & 1 and b == a + 1:
                p = a >> 1
                hp = height(p)
                if hp <= big:
                    tl = main.prev_leader(a)
                    wr = main.next_leader(b)
                    if (tl is None or hp <= height(tl) + 1) and (wr is None or hp <= height(wr) + 1):
                        ok = main.activation_blocker(p) is None
            if ok:
                main.activate(p)
                activations += 1
                hc = hp - 1
                ht_ = height(tl) if tl is not None else None
                hw_ = height(wr) if wr is not None else None
                old = (_bill(ht_, hc) if ht_ is not None else 0) + (_bill(hc, hw_) if hw_ is not None else 0)
                new = (_bill(ht_, hp) if ht_ is not None else 0) + (_bill(hp, hw_) if hw_ is not None else 0)
                ledger.adjust(0, new - old)
                nodes[u] = p
                after = nxt[v]
                nxt[u] = after
                if after != -1:
                    prv[after] = u
                for _ in range(2):
                    if ptr != -1:
                        ptr = prv[ptr]
            else:
                ptr = u

        # (d) Rebuild L_0..L_i by height class.
        buckets: list[list[tuple[int, int, int]]] = [[] for _ in range(i + 1)]
        minleaf = main.minleaf
        coins_after = 0
        final_heights = []
        u = 0 if size else -1
        while u != -1:
            x = nodes[u]
            h = height(x)
            j = level_for_height(h)
            key = leftmost(x)
            level[key] = j
            buckets[j].append((key, h, minleaf[x]))
            coins_after += _coins(h, j)
            final_heights.append(h)
            u = nxt[u]
        for j in range(i + 1):
            forest.trees[j].rebuild(buckets[j])
        up = forest.trees[i + 1]
        n_promoted = 0
        for block in promoted:
            for key, h, _ in block:
                level[key] = i + 1
                coins_after += _coins(h, i + 1)
            up.bulk_insert(block)
            n_promoted += len(block)
        ledger.adjust(coins_after - coins_before, 0)
        forest.refresh_chain(i + 1)
        for j in range(i + 2):
            forest.note_size(j)

        self.stats[f"cleanup_step_{i}"] += 1
        self.stats["activations"] += activations
        self.stats["promoted"] += n_promoted
        if self.debug:
            self._check_after_cleanup(i, final_heights)
        return activations, n_promoted

    def _check_after_cleanup(self, i: int, heights: list[int]) -> None:
        th = self.forest.thresholds
        for tree in self.forest.trees:
            j = tree.level
            limit = th.after(j) if j == i + 1 else th.before(j)
            if tree.size > limit:
                raise InvariantViolation(
                    "cleanup-sizes", f"after cleanup_step({i}): |L_{j}| = {tree.size} exceeds {limit}"
                )
        big = 4 << i
        counts = Counter(h for h in heights if h < big)
        running = 0
        for k in range(min(big, max(counts, default=-1) + 1)):
            running += counts.get(k, 0)
            if running > 16 * 4**k:
                raise InvariantViolation(
                    "height-profile", f"after cleanup_step({i}): {running} leaders of height <= {k} exceed {16 * 4**k}"
                )

    # -- debugging ----------------------------------------------------------

    def dump(self) -> str:
        return self.main.dump() + "--\n" + self.forest.dump()

    def __repr__(self) -> str:
        return f"UnifiedTree(n={self.n}, t={self.t}, levels={self.forest.sizes()})"

