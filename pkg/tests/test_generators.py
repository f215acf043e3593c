import math

import pytest

from unitopsort.generators import KINDS, generate, known_log2_extensions
from unitopsort.oracle import count_linear_extensions


@pytest.mark.parametrize("kind", KINDS)
def test_orders_are_compatible_and_deterministic(kind):
    g, order = generate(kind, 30, 7)
    pos = {v: k for k, v in enumerate(order)}
    assert sorted(order) == list(range(1, 31))
    assert all(pos[u] < pos[v] for u, v in g.edges)
    assert generate(kind, 30, 7) == (g, order)


def test_chain_is_unique_order():
    g, order = generate("chain", 5, 0)
    assert count_linear_extensions(g) == 1 and g.m == 4


def test_k_chains_and_edgeless_counts():
    g, _ = generate("k-chains", 8, 0, k=2)
    assert count_linear_extensions(g) == 70
    g, _ = generate("edgeless", 4, 0)
    assert count_linear_extensions(g) == 24


@pytest.mark.parametrize("kind, k", [("edgeless", 2), ("chain", 2), ("k-chains", 3), ("k-chains", 2)])
def test_known_counts_match_oracle(kind, k):
    g, _ = generate(kind, 12, 1, k=k)
    assert known_log2_extensions(kind, 12, k=k) == pytest.approx(math.log2(count_linear_extensions(g)))
    assert known_log2_extensions("random-edges", 12) is None


def test_bad_parameters():
    with pytest.raises(ValueError):
        generate("nope", 5, 0)
    with pytest.raises(ValueError):
        generate("random-edges", 5, 0, p=2)
    with pytest.raises(ValueError):
        generate("k-chains", 5, 0, k=0)
    with pytest.raises(ValueError):
        generate("chain", -1, 0)
