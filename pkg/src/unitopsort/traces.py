"""Text trace formats, replay, fuzzing and trace shrinking.

Heap traces hold one operation per line, ``push <key>`` or ``pop``. Tree
traces use ``addleaf <key>``, ``access <i>``, ``changekey <i> <key>`` and
``checkpoint``, where ``checkpoint`` forces a full invariant check. The
key ``inf`` stands for the empty-leaf sentinel.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .checks import InvariantViolation, check_invariants
from .heap import UnifiedHeap
from .index_forest import PRODUCTION, Thresholds
from .ledger import LedgerDrift, OpLog
from .main_tree import INF
from .oracle import unified_bound_terms, working_set_terms
from .unified_tree import UnifiedTree

__all__ = [
    "FuzzResult",
    "HeapReplay",
    "TraceError",
    "format_heap_trace",
    "format_tree_trace",
    "fuzz",
    "inject_fault",
    "parse_heap_trace",
    "parse_tree_trace",
    "random_heap_trace",
    "random_tree_trace",
    "replay_heap_trace",
    "replay_tree_trace",
    "shrink",
]

CHECK_MODES = ("off", "fast", "full")


class TraceError(ValueError):
    """Malformed trace line or an operation that is invalid in context."""


def _key(tok: str, line: int):
    if tok.lower() in ("inf", "+inf"):
        return INF
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        raise TraceError(f"line {line}: bad key {tok!r}") from None


def _fmt_key(k) -> str:
    return "inf" if k is INF else str(k)


# -- heap traces -------------------------------------------------------------


def parse_heap_trace(text: str) -> list[tuple]:
    ops = []
    for no, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "push" and len(parts) == 2:
            key = _key(parts[1], no)
            if key is INF:
                raise TraceError(f"line {no}: cannot push inf")
            ops.append(("push", key))
        elif parts == ["pop"]:
            ops.append(("pop",))
        else:
            raise TraceError(f"line {no}: expected 'push <key>' or 'pop', got {raw.strip()!r}")
    return ops


def format_heap_trace(ops: Sequence[tuple]) -> str:
    return "".join(f"push {_fmt_key(op[1])}\n" if op[0] == "push" else "pop\n" for op in ops)


def random_heap_trace(
    rng: random.Random, n_ops: int, *, key_range: int = 10**6, push_bias: float = 0.55
) -> list[tuple]:
    """Random push/pop interleaving; pops only when the heap is non-empty."""
    ops = []
    size = 0
    for _ in range(n_ops):
        if size == 0 or rng.random() < push_bias:
            ops.append(("push", rng.randrange(key_range)))
            size += 1
        else:
            ops.append(("pop",))
            size -= 1
    return ops


@dataclass
class HeapReplay:
    pops: list
    log: OpLog
    heap: UnifiedHeap
    unified: list[float] = field(default_factory=list)
    working_set: list[float] = field(default_factory=list)

    def csv(self) -> str:
        return self.log.to_csv(("unified_budget_cum", "working_set_budget_cum"))


def replay_heap_trace(
    ops: Sequence[tuple],
    *,
    thresholds: Thresholds = PRODUCTION,
    check: str = "off",
    budgets: bool = True,
) -> HeapReplay:
    """Run a heap trace, logging per-operation cost and cumulative budgets."""
    if check not in CHECK_MODES:
        raise ValueError(f"check must be one of {CHECK_MODES}")
    if sum(1 if op[0] == "push" else -1 for op in ops) < 0 or any(
        s < 0 for s in itertools.accumulate(1 if op[0] == "push" else -1 for op in ops)
    ):
        raise TraceError("trace pops from an empty heap")
    ub = unified_bound_terms(ops) if budgets else []
    ws = working_set_terms(ops) if budgets else []
    heap = UnifiedHeap(thresholds=thresholds, debug=check != "off")
    log = OpLog(heap.ledger)
    pops = []
    ub_cum = ws_cum = 0.0
    k = 0
    log.start()
    for op in ops:
        if op[0] == "push":
            heap.push(op[1])
            name = "push"
        else:
            pops.append(heap.pop())
            if budgets:
                ub_cum += ub[k]
                ws_cum += ws[k]
            k += 1
            name = "pop"
        if check != "off":
            check_invariants(heap.tree, check)
        log.record(name, f"{ub_cum:.6f}" if budgets else "", f"{ws_cum:.6f}" if budgets else "")
    return HeapReplay(pops, log, heap, ub, ws)


# -- tree traces -------------------------------------------------------------


def parse_tree_trace(text: str) -> list[tuple]:
    ops = []
    for no, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        head, args = parts[0], parts[1:]
        try:
            if head == "addleaf" and len(args) == 1:
                ops.append(("addleaf", _key(args[0], no)))
            elif head == "access" and len(args) == 1:
                ops.append(("access", int(args[0])))
            elif head == "changekey" and len(args) == 2:
                ops.append(("changekey", int(args[0]), _key(args[1], no)))
            elif head == "checkpoint" and not args:
                ops.append(("checkpoint",))
            else:
                raise TraceError(f"line {no}: unrecognised operation {raw.strip()!r}")
        except ValueError as e:
            if isinstance(e, TraceError):
                raise
            raise TraceError(f"line {no}: bad leaf index in {raw.strip()!r}") from None
    return ops


def format_tree_trace(ops: Sequence[tuple]) -> str:
    lines = []
    for op in ops:
        if op[0] == "addleaf":
            lines.append(f"addleaf {_fmt_key(op[1])}")
        elif op[0] == "access":
            lines.append(f"access {op[1]}")
        elif op[0] == "changekey":
            lines.append(f"changekey {op[1]} {_fmt_key(op[2])}")
        else:
            lines.append("checkpoint")
    return "\n".join(lines) + ("\n" if lines else "")


def replay_tree_trace(
    ops: Sequence[tuple],
    *,
    thresholds: Thresholds = PRODUCTION,
    check: str = "off",
    corrupt: Callable[[UnifiedTree], None] | None = None,
) -> UnifiedTree:
    """Apply a tree trace, checking invariants per ``check`` and at checkpoints.

    ``corrupt`` is a fault-injection hook called after every operation.
    """
    if check not in CHECK_MODES:
        raise ValueError(f"check must be one of {CHECK_MODES}")
    tree = UnifiedTree(thresholds=thresholds, debug=check != "off")
    for k, op in enumerate(ops):
        kind = op[0]
        if kind == "addleaf":
            tree.add_leaf(op[1])
        elif kind in ("access", "changekey"):
            if not 1 <= op[1] <= tree.n:
                raise TraceError(f"op {k + 1}: leaf {op[1]} out of range [1, {tree.n}]")
            if kind == "access":
                tree.access(op[1])
            else:
                tree.change_key(op[1], op[2])
        elif kind == "checkpoint":
            check_invariants(tree, "full")
            continue
        else:
            raise TraceError(f"op {k + 1}: unknown operation {kind!r}")
        if corrupt is not None:
            corrupt(tree)
        if check != "off":
            check_invariants(tree, check)
    return tree


def random_tree_trace(
    rng: random.Random,
    n_ops: int,
    n_cap: int,
    *,
    key_range: int = 1000,
    checkpoint_every: int = 0,
) -> list[tuple]:
    """Mixed workload: appends, uniform and local accesses, key changes."""
    ops: list[tuple] = []
    n = 0
    last = 1
    for k in range(n_ops):
        r = rng.random()
        if n == 0 or (n < n_cap and r < 0.3):
            ops.append(("addleaf", rng.randrange(key_range)))
            n += 1
        elif r < 0.75:
            mode = rng.random()
            if mode < 0.4:
                i = rng.randint(1, n)
            elif mode < 0.8:
                i = min(n, max(1, last + rng.randint(-3, 3)))
            else:
                i = last
            ops.append(("access", i))
            last = i
        else:
            key = INF if rng.random() < 0.2 else rng.randrange(key_range)
            ops.append(("changekey", rng.randint(1, n), key))
        if checkpoint_every and (k + 1) % checkpoint_every == 0:
            ops.append(("checkpoint",))
    return ops


# -- fuzzing -----------------------------------------------------------------


def inject_fault(tree: UnifiedTree) -> None:
    """Test hook: once 8 leaves exist and 3 accesses happened, activate leaf n's parent."""
    main = tree.main
    if main.n >= 8 and main.t >= 3:
        main.active[(main.m + main.n - 1) >> 1] = 1


def _failure(ops, thresholds, check, corrupt) -> str | None:
    """Name of the invariant the trace breaks, or ``None`` if it passes (or is invalid)."""
    try:
        replay_tree_trace(ops, thresholds=thresholds, check=check, corrupt=corrupt)
    except InvariantViolation as e:
        return e.invariant
    except LedgerDrift:
        return "ledger"
    except TraceError:
        return None
    return None


def shrink(ops: Sequence[tuple], fails: Callable[[list[tuple]], bool]) -> list[tuple]:
    """Greedy chunk deletion (ddmin-style) down to a 1-minimal failing trace."""
    ops = list(ops)
    chunk = max(1, len(ops) // 2)
    while True:
        i = 0
        removed = False
        while i < len(ops):
            cand = ops[:i] + ops[i + chunk :]
            if cand and fails(cand):
                ops = cand
                removed = True
            else:
                i += chunk
        if chunk == 1 and not removed:
            return ops
        if not removed:
            chunk = max(1, chunk // 2)


@dataclass
class FuzzResult:
    passed: bool
    seed: int
    ops_run: int
    invariant: str | None = None
    message: str = ""
    witness: list[tuple] = field(default_factory=list)


def fuzz(
    n_ops: int,
    n_cap: int,
    seed: int,
    *,
    thresholds: Thresholds = PRODUCTION,
    check: str = "full",
    check_every: int = 1,
    corrupt: Callable[[UnifiedTree], None] | None = None,
    shrink_failures: bool = True,
) -> FuzzResult:
    """Random trace with invariant checks every ``check_every`` operations.

    The structure's own debug assertions run on every operation. A failure
    is shrunk to a short witness trace when ``shrink_failures`` is set.
    """
    rng = random.Random(seed)
    ops = random_tree_trace(rng, n_ops, n_cap)
    tree = UnifiedTree(thresholds=thresholds, debug=True)
    k = 0
    try:
        for k, op in enumerate(ops):
            if op[0] == "addleaf":
                tree.add_leaf(op[1])
            elif op[0] == "access":
                tree.access(op[1])
            else:
                tree.change_key(op[1], op[2])
            if corrupt is not None:
                corrupt(tree)
            if check != "off" and ((k + 1) % check_every == 0 or k == len(ops) - 1):
                check_invariants(tree, check)
    except (InvariantViolation, LedgerDrift) as e:
        name = getattr(e, "invariant", "ledger")
        prefix = ops[: k + 1]
        witness = prefix
        if shrink_failures:
            mode = check if check != "off" else "fast"
            witness = shrink(prefix, lambda c: _failure(c, thresholds, mode, corrupt) == name)
        return FuzzResult(False, seed, k + 1, name, str(e), witness)
    return FuzzResult(True, seed, len(ops))
