import random

import pytest

from unitopsort.checks import check_invariants
from unitopsort.heap import UnifiedHeap
from unitopsort.index_forest import DESK
from unitopsort.main_tree import INF
from unitopsort.oracle import reference_heap_replay
from unitopsort.traces import random_heap_trace


def test_push_peek():
    h = UnifiedHeap()
    h.push(5)
    assert h.peek() == 5
    h.push(3)
    assert h.peek() == 3 and len(h) == 2


def test_heapsort_small():
    h = UnifiedHeap([3, 1, 2])
    assert [h.pop(), h.pop(), h.pop()] == [1, 2, 3]
    assert not h
    with pytest.raises(IndexError):
        h.pop()
    with pytest.raises(IndexError):
        h.peek()


def test_push_rank_is_leaf():
    h = UnifiedHeap([4, 2, 9, 1])
    h.pop()
    h.pop()
    assert h.pop_log == [4, 2]
    assert h.pop_ranks() == [(4, 1), (2, 2)]
    assert h.tree.item(4) is INF


def test_inf_cannot_be_pushed():
    with pytest.raises(ValueError):
        UnifiedHeap().push(INF)


def test_custom_comparator_and_ties():
    h = UnifiedHeap(less=lambda a, b: a[0] < b[0])
    for x in [(1, "a"), (0, "b"), (1, "c"), (0, "d")]:
        h.push(x)
    assert [h.pop() for _ in range(4)] == [(0, "b"), (0, "d"), (1, "a"), (1, "c")]


def test_matches_reference_with_checks():
    for seed in range(5):
        ops = random_heap_trace(random.Random(seed), 600, key_range=30)
        h = UnifiedHeap(thresholds=DESK, debug=True)
        out = []
        for k, op in enumerate(ops):
            if op[0] == "push":
                h.push(op[1])
            else:
                out.append(h.pop())
            if k % 50 == 0:
                check_invariants(h.tree, "fast")
        assert out == reference_heap_replay(ops)


def test_sentinel_never_reaches_comparator():
    seen = []

    def less(a, b):
        seen.append(a)
        seen.append(b)
        return a < b

    h = UnifiedHeap(less=less, thresholds=DESK)
    for k in range(300):
        h.push(k % 17)
    for _ in range(150):
        h.pop()
    for k in range(100):
        h.push(k)
    while h:
        h.pop()
    assert all(x is not INF for x in seen)
