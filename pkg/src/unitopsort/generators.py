"""Seeded instance generators: a DAG plus a compatible hidden order.

Vertex labels are shuffled so that ids carry no order information. The
hidden order is drawn by repeatedly picking a uniformly random current
source, which is *near*-uniform over linear extensions but not exactly so
(that is fine for correctness tests).
"""

from __future__ import annotations

import math
import random

from .graph import Dag

__all__ = ["KINDS", "generate", "known_log2_extensions", "sample_compatible_order"]

KINDS = ("edgeless", "chain", "k-chains", "random-edges", "hamiltonian-plus-noise", "interval-induced")


def sample_compatible_order(g: Dag, rng: random.Random) -> list[int]:
    """Linear extension built by choosing a uniformly random source at each step."""
    indeg = [len(a) for a in g.in_adj]
    sources = [v for v in range(1, g.n + 1) if indeg[v] == 0]
    out = []
    while sources:
        k = rng.randrange(len(sources))
        sources[k], sources[-1] = sources[-1], sources[k]
        u = sources.pop()
        out.append(u)
        for v in g.out_adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                sources.append(v)
    return out


def _labels(n: int, rng: random.Random) -> list[int]:
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return perm


def _chains(lab: list[int], k: int) -> list[tuple[int, int]]:
    n = len(lab)
    edges = []
    start = 0
    for c in range(k):
        size = n // k + (1 if c < n % k else 0)
        edges.extend((lab[j], lab[j + 1]) for j in range(start, start + size - 1))
        start += size
    return edges


def generate(
    kind: str,
    n: int,
    seed: int,
    *,
    k: int = 2,
    p: float = 0.1,
    q: float = 0.1,
    w: int = 4,
) -> tuple[Dag, list[int]]:
    """Return ``(dag, hidden_order)`` for one of :data:`KINDS`.

    ``k`` chains for ``k-chains``; edge probability ``p`` for
    ``random-edges``; off-path fraction ``q`` for ``hamiltonian-plus-noise``;
    maximum interval length ``w`` for ``interval-induced``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = random.Random(seed)
    lab = _labels(n, rng)
    if kind == "edgeless":
        edges = []
    elif kind == "chain":
        edges = _chains(lab, 1) if n else []
    elif kind == "k-chains":
        if k < 1:
            raise ValueError("k must be at least 1")
        edges = _chains(lab, min(k, max(n, 1)))
    elif kind == "random-edges":
        if not 0 <= p <= 1:
            raise ValueError("p must lie in [0, 1]")
        edges = [(lab[i], lab[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    elif kind == "hamiltonian-plus-noise":
        if not 0 <= q <= 1:
            raise ValueError("q must lie in [0, 1]")
        # Most vertices form a chain; each noise vertex hangs off it by up to two edges.
        noise = [rng.random() < q for _ in range(n)]
        spine = [lab[i] for i in range(n) if not noise[i]]
        edges = list(zip(spine, spine[1:]))
        spine_pos = [i for i in range(n) if not noise[i]]
        for i in range(n):
            if not noise[i]:
                continue
            before = [j for j in spine_pos if j < i]
            after = [j for j in spine_pos if j > i]
            if before and rng.random() < 0.8:
                edges.append((lab[rng.choice(before[-3:])], lab[i]))
            if after and rng.random() < 0.8:
                edges.append((lab[i], lab[rng.choice(after[:3])]))
    elif kind == "interval-induced":
        if w < 0:
            raise ValueError("w must be non-negative")
        starts = sorted(rng.uniform(0, n) for _ in range(n))
        ends = [s + rng.uniform(0, w) for s in starts]
        edges = [(lab[i], lab[j]) for i in range(n) for j in range(n) if ends[i] < starts[j]]
    else:
        raise ValueError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    g = Dag(n, edges)
    return g, sample_compatible_order(g, rng)


def known_log2_extensions(kind: str, n: int, *, k: int = 2) -> float | None:
    """Closed-form ``log2 e(G)`` where the kind determines it, else ``None``."""
    if kind == "edgeless":
        return math.lgamma(n + 1) / math.log(2)
    if kind == "chain":
        return 0.0
    if kind == "k-chains":
        k = min(k, max(n, 1))
        sizes = [n // k + (1 if c < n % k else 0) for c in range(k)]
        return (math.lgamma(n + 1) - sum(math.lgamma(s + 1) for s in sizes)) / math.log(2)
    return None
