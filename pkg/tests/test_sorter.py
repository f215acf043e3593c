import math
import random

import pytest

from unitopsort.generators import KINDS, generate
from unitopsort.graph import Dag
from unitopsort.index_forest import DESK
from unitopsort.sorter import (
    CountingComparator,
    InconsistentComparator,
    galloping_merge,
    interval_bounds,
    interval_sum,
    interval_order_violations,
    run_sort,
    sort_under_partial_info,
    uni_top_sort,
)


def counting(xs):
    calls = [0]

    def less(a, b):
        calls[0] += 1
        return a < b

    return less, calls


def test_galloping_examples():
    less, calls = counting(None)
    assert galloping_merge(list(range(1, 9)), [], less) == list(range(1, 9))
    assert calls[0] == 0
    less, calls = counting(None)
    assert galloping_merge(list(range(1, 9)), [9], less) == list(range(1, 10))
    assert calls[0] <= 2 * (1 + math.log2(9))
    less, calls = counting(None)
    assert galloping_merge(list(range(1, 9)), [2.5], less) == [1, 2, 2.5, 3, 4, 5, 6, 7, 8]
    assert calls[0] <= 2 * (1 + math.log2(3))


def test_galloping_random_and_bounds():
    rng = random.Random(4)
    for _ in range(200):
        path = sorted(rng.sample(range(1000), rng.randint(0, 40)))
        rest = sorted(rng.sample([x + 0.5 for x in range(1000)], rng.randint(0, 10)))
        less = lambda a, b: a < b
        assert galloping_merge(path, rest, less) == sorted(path + rest)
        import bisect

        bounds = [(bisect.bisect(path, x), bisect.bisect(path, x)) for x in rest]
        calls = [0]

        def cl(a, b):
            calls[0] += 1
            return a < b

        assert galloping_merge(path, rest, cl, bounds) == sorted(path + rest)
        assert calls[0] == 0


def test_uni_top_sort_examples():
    g = Dag(3, [(1, 2), (2, 3)])
    cmp = CountingComparator.from_order([1, 2, 3])
    assert uni_top_sort(g, cmp) == [1, 2, 3]
    n = 64
    order = list(range(1, n + 1))
    random.Random(1).shuffle(order)
    cmp = CountingComparator.from_order(order)
    assert uni_top_sort(Dag(n), cmp) == order
    assert cmp.calls <= 8 * n * math.log2(n)


def test_two_chains_linear_comparisons():
    # Desk thresholds put the structure in its steady state at these sizes.
    per_n = []
    for n in (1024, 4096, 16384):
        g, order = generate("k-chains", n, 3, k=2)
        run = run_sort(g, CountingComparator.from_order(order), "unitopsort", thresholds=DESK)
        assert run.result == order
        per_n.append(run.comparisons / n)
    assert max(per_n) <= 64
    assert per_n[-1] <= 1.1 * per_n[0]


def test_full_pipeline_examples():
    ham = Dag(10, [(k, k + 1) for k in range(1, 10)])
    run = run_sort(ham, CountingComparator.from_order(list(range(1, 11))), "full")
    assert run.result == list(range(1, 11)) and run.comparisons == 0 and run.algorithm == "full"

    g = Dag(11, [(k, k + 1) for k in range(1, 10)])
    order = [1, 2, 3, 4, 11, 5, 6, 7, 8, 9, 10]
    run = run_sort(g, CountingComparator.from_order(order), "full")
    assert run.result == order
    assert run.comparisons <= 3 * math.log2(11)

    g = Dag(8)
    order = [5, 3, 8, 1, 2, 7, 6, 4]
    run = run_sort(g, CountingComparator.from_order(order), "full")
    assert run.algorithm == "mergesort" and run.result == order
    assert run.comparisons <= 8 * 3


def test_sort_under_partial_info_wrapper():
    g, order = generate("hamiltonian-plus-noise", 60, 2)
    assert sort_under_partial_info(g, CountingComparator.from_order(order)) == order


def test_inconsistent_comparator_detected():
    g = Dag(3, [(1, 2), (2, 3)])
    with pytest.raises(InconsistentComparator):
        uni_top_sort(g, CountingComparator.from_order([3, 2, 1]))
    with pytest.raises(InconsistentComparator):
        run_sort(Dag(4, [(1, 2)]), CountingComparator.from_order([2, 1, 3, 4]), "mergesort")


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        run_sort(Dag(1), lambda a, b: a < b, "quick")


def test_phase_separation_and_interval_order_on_every_kind():
    for seed, kind in enumerate(KINDS * 3):
        g, order = generate(kind, 40, seed, p=0.1, k=3)
        for algo in ("unitopsort", "full", "mergesort"):
            run = run_sort(g, CountingComparator.from_order(order), algo)
            assert run.result == order
            assert run.preprocessing_comparisons == 0
            assert run.comparisons <= run.steps or algo == "mergesort"
            if run.graph is not None:
                assert interval_order_violations(run.graph, run.push_rank, run.pop_rank) == []


def test_interval_bounds_by_hand():
    # three items: a = (1, 2, 3), b = (2, 1, 3)
    a = [0, 1, 2, 3]
    b = [0, 2, 1, 3]
    ell, r = interval_bounds(a, b)
    assert r[1:] == [3, 3, 6]
    # item 3: both earlier items have smaller a and b, so l = max(3, 3)
    assert ell[1:] == [0, 0, 3]
    assert interval_sum(a, b) == pytest.approx(math.log2(3) * 2 + math.log2(3))


def test_interval_order_detects_a_bad_trace():
    g = Dag(2, [(1, 2)])
    assert interval_order_violations(g, [0, 2, 1], [0, 1, 2]) == [(1, 2)]


def test_csv_row():
    g, order = generate("chain", 5, 0)
    run = run_sort(g, CountingComparator.from_order(order), "unitopsort")
    run.log2_eg = 0.0
    assert run.csv_row() == [5, 4, run.comparisons, run.steps, "0.000000", "unitopsort"]
