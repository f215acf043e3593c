import pytest

from unitopsort.main_tree import INF, NEVER, MainTree


def test_init_sizes():
    assert MainTree(0).m == 2
    assert MainTree(3).m == 4
    assert MainTree(4).m == 8
    t = MainTree(0)
    assert not any(t.active) and t.n == 0 and t.t == 0


def test_activate_and_doubling():
    t = MainTree(0)
    assert t.activate_leaf("a") == 1
    assert t.leaders() == [t.leaf_node(1)]
    t.activate_leaf("b")
    assert t.m == 4 and t.n == 2
    assert not t.active[t.leaf_node(1) >> 1]
    assert t.leaders() == [t.leaf_node(1), t.leaf_node(2)]
    t.activate_leaf("c")
    assert t.m == 4
    t.activate_leaf("d")
    assert t.m == 8 and t.n == 4
    assert [t.items[i] for i in range(1, 5)] == ["a", "b", "c", "d"]
    assert all(t.active[t.leaf_node(i)] for i in range(1, 5))
    assert not any(t.active[t.leaf_node(i)] for i in range(5, 9))


def test_doubling_preserves_active_structure():
    t = MainTree(0)
    for k in range(3):
        t.activate_leaf(k)
    p = t.leaf_node(1) >> 1
    t.activate(p)
    t.activate_leaf(3)  # m: 4 -> 8
    q = t.leaf_node(1) >> 1
    assert t.active[q] and t.height(q) == 1
    assert t.leader_of(1) == t.leader_of(2) == q


def test_leader_navigation():
    t = MainTree(0)
    for k in range(3):
        t.activate_leaf(k)
    a, b, c = (t.leaf_node(i) for i in (1, 2, 3))
    assert t.next_leader(a) == b and t.prev_leader(b) == a
    assert t.next_leader(c) is None and t.prev_leader(a) is None
    single = MainTree(0)
    single.activate_leaf(0)
    x = single.leaf_node(1)
    assert single.next_leader(x) is None and single.prev_leader(x) is None


def test_leader_of_after_activation():
    t = MainTree(0)
    for k in range(3):
        t.activate_leaf(k)
    assert t.leader_of(1) == t.leaf_node(1)
    p = t.leaf_node(1) >> 1
    t.activate(p)
    assert t.leader_of(1) == t.leader_of(2) == p
    assert t.cursor(p).height == 1 and t.cursor(p).leftmost == 1
    with pytest.raises(IndexError):
        t.leader_of(4)


def test_navigation_across_heights():
    t = MainTree(0)
    for k in range(15):
        t.activate_leaf(k)
    # leaves 1..4 under one height-2 leader, then single leaves
    p1, p2 = t.leaf_node(1) >> 1, t.leaf_node(3) >> 1
    t.activate(p1)
    t.activate(p2)
    t.activate(p1 >> 1)
    big = p1 >> 1
    assert t.height(big) == 2
    assert t.next_leader(big) == t.leaf_node(5)
    assert t.prev_leader(t.leaf_node(5)) == big


def test_deactivate():
    t = MainTree(0)
    for k in range(5):
        t.activate_leaf(k)
    p = t.leaf_node(1) >> 1
    q = t.leaf_node(3) >> 1
    t.activate(p)
    t.activate(q)
    t.activate(p >> 1)
    assert t.deactivate(p >> 1) == (p, q)
    assert t.is_leader(p) and t.is_leader(q)
    assert t.deactivate(p) == (t.leaf_node(1), t.leaf_node(2))
    with pytest.raises(ValueError):
        t.deactivate(t.leaf_node(1))
    with pytest.raises(ValueError):
        t.deactivate(p)


def test_recompute_min_path():
    t = MainTree(0)
    t.activate_leaf(5)
    t.activate_leaf(2)
    t.activate_leaf(7)
    assert t.recompute_min_path(3) == t.leaf_node(3)
    p = t.leaf_node(1) >> 1
    t.activate(p)
    assert t.minleaf[p] == 2
    t.set_item(2, 9)
    assert t.recompute_min_path(2) == p
    assert t.minleaf[p] == 1


def test_inf_never_compared():
    calls = []

    def less(a, b):
        calls.append((a, b))
        return a < b

    t = MainTree(0, less)
    t.activate_leaf(INF)
    t.activate_leaf(4)
    t.activate_leaf(0)
    p = t.leaf_node(1) >> 1
    t.activate(p)
    assert t.minleaf[p] == 2 and calls == []


def test_min2_ties_prefer_lower_leaf():
    t = MainTree(0)
    t.activate_leaf(1)
    t.activate_leaf(1)
    assert t.min2(2, 1) == 1 and t.min2(1, 2) == 1
    assert t.min2(0, 2) == 2 and t.min2(2, 0) == 2


def test_lock_height_and_stamp():
    t = MainTree(0)
    for k in range(8):
        t.activate_leaf(k)
    assert t.lock_height(NEVER) == t.depth
    t.stamp(3)
    assert t.access_time(3) == 0 and t.t == 1
    assert t.lock_height(0) == 1  # ceil(log2(1 + 1 - 0))
    t.t = 4
    assert t.lock_height(0) == 3  # ceil(log2 5)
    t.t = 3
    assert t.lock_height(0) == 2  # ceil(log2 4)


def test_activation_blocker():
    t = MainTree(0)
    for k in range(5):
        t.activate_leaf(k)
    assert t.activation_blocker(1) == "root"
    last = t.leaf_node(5) >> 1
    assert t.activation_blocker(last) == "(5)"
    p = t.leaf_node(1) >> 1
    assert t.activation_blocker(p) is None
    t.stamp(1)
    assert t.activation_blocker(p) == "(4)"


def test_dump_golden():
    t = MainTree(0)
    t.activate_leaf(3)
    t.activate_leaf(1)
    t.activate_leaf(2)
    t.stamp(2)
    assert t.dump() == (
        "1 2 0 0 never\n"
        "2 1 0 0 never\n"
        "3 1 0 0 never\n"
        "4 0 1 1 never\n"
        "5 0 1 2 0\n"
        "6 0 1 3 never\n"
        "7 0 0 0 never\n"
    )
