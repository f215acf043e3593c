"""Cost instrumentation: comparison and step counters plus coin/bill potential.

Every structure in this package charges its work to a :class:`CostLedger`.
A *step* is one node touch in the main tree or an index tree (plus the
constant work around it); every comparison is also a step, so
``comparisons <= steps`` always holds.

Coins and bills are the amortization currency of the unified-bound tree:

* two coins per leader, plus one per unpromoted leader;
* ``max(0, |h(u) - h(v)| - 1)`` bills per pair of consecutive leaders.

The structure keeps running totals by applying local deltas as leaders are
created and destroyed; :func:`reconcile` recomputes both quantities from
scratch and reports any drift.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "BILL_WEIGHT",
    "BudgetResult",
    "CostLedger",
    "LedgerDrift",
    "OpLog",
    "Reconciliation",
    "bills_of",
    "budget_check",
    "reconcile",
]

# Exchange rate between bills and coins in the potential; only used when a
# caller asks for a single number.
BILL_WEIGHT = 10**9


class LedgerDrift(AssertionError):
    """Running coin/bill totals disagree with a recomputation."""


@dataclass
class CostLedger:
    comparisons: int = 0
    steps: int = 0
    coins: int = 0
    bills: int = 0
    phase: str = "idle"

    def adjust(self, coins: int, bills: int) -> None:
        self.coins += coins
        self.bills += bills

    def potential(self, bill_weight: int = BILL_WEIGHT) -> int:
        return self.coins + bill_weight * self.bills

    def snapshot(self) -> tuple[int, int, int, int]:
        return (self.comparisons, self.steps, self.coins, self.bills)

    def reset_counters(self) -> None:
        self.comparisons = 0
        self.steps = 0


def bills_of(heights: Sequence[int]) -> int:
    """Bills owed by a left-to-right run of leader heights."""
    total = 0
    for a, b in zip(heights, heights[1:]):
        d = a - b if a > b else b - a
        if d > 1:
            total += d - 1
    return total


@dataclass(frozen=True)
class Reconciliation:
    coins: int
    bills: int
    running_coins: int
    running_bills: int

    @property
    def drift(self) -> tuple[int, int]:
        return (self.running_coins - self.coins, self.running_bills - self.bills)

    @property
    def ok(self) -> bool:
        return self.drift == (0, 0)


def reconcile(ledger: CostLedger, tree, *, strict: bool = True) -> Reconciliation:
    """Recompute coins and bills from ``tree`` and compare with ``ledger``.

    ``tree`` is a :class:`~unitopsort.unified_tree.UnifiedTree`. With
    ``strict`` set, a mismatch raises :class:`LedgerDrift`.
    """
    coins, bills = tree.money()
    rec = Reconciliation(coins, bills, ledger.coins, ledger.bills)
    if strict and not rec.ok:
        raise LedgerDrift(
            f"coin/bill drift: running=({ledger.coins}, {ledger.bills}) "
            f"recomputed=({coins}, {bills})"
        )
    return rec


@dataclass(frozen=True)
class BudgetResult:
    constant: float
    ceiling: float
    steps: int
    budget: float

    @property
    def passed(self) -> bool:
        return self.constant <= self.ceiling


def budget_check(
    steps_total: int,
    budgets: Iterable[float],
    *,
    ceiling: float,
    phi_initial: float = 0.0,
    phi_final: float = 0.0,
) -> BudgetResult:
    """Fit the least ``C`` with ``steps_total <= C * (sum(budgets) + phi_initial - phi_final)``."""
    budget = float(sum(budgets)) + phi_initial - phi_final
    if budget <= 0:
        raise ValueError(f"non-positive total budget {budget}")
    return BudgetResult(steps_total / budget, ceiling, steps_total, budget)


@dataclass
class OpLog:
    """Per-operation ledger rows for CSV export."""

    ledger: CostLedger
    columns: tuple[str, ...] = ("op", "comparisons", "steps", "coins", "bills")
    rows: list[list] = field(default_factory=list)
    _last: tuple[int, int] = (0, 0)

    def start(self) -> None:
        self._last = (self.ledger.comparisons, self.ledger.steps)

    def record(self, op: str, *extra) -> list:
        c, s = self.ledger.comparisons, self.ledger.steps
        row = [op, c - self._last[0], s - self._last[1], self.ledger.coins, self.ledger.bills, *extra]
        self._last = (c, s)
        self.rows.append(row)
        return row

    def to_csv(self, extra_columns: Sequence[str] = ()) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([*self.columns, *extra_columns])
        w.writerows(self.rows)
        return buf.getvalue()
