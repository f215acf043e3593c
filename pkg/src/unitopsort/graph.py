"""DAGs of known order relations, and the longest-path shortcut reduction.

Vertices are ``1..n``; an edge ``(u, v)`` means ``u`` precedes ``v``.

File format::

    n m
    u1 v1
    ...

followed by ``m`` edge lines. A linear order file is a single line of ``n``
distinct ids, position = rank.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "Dag",
    "DagError",
    "Reduction",
    "format_dag",
    "format_order",
    "longest_path",
    "parse_dag",
    "parse_order",
    "reduce",
    "topological_order",
]


class DagError(ValueError):
    """Malformed input, out-of-range id, self-loop, or cycle."""


class Dag:
    """Immutable adjacency representation of a directed acyclic graph."""

    __slots__ = ("n", "edges", "out_adj", "in_adj", "_topo")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise DagError(f"negative vertex count {n}")
        self.n = n
        self.edges = tuple((int(u), int(v)) for u, v in edges)
        out_adj: list[list[int]] = [[] for _ in range(n + 1)]
        in_adj: list[list[int]] = [[] for _ in range(n + 1)]
        for k, (u, v) in enumerate(self.edges):
            if not (1 <= u <= n and 1 <= v <= n):
                raise DagError(f"edge {k + 1} ({u}, {v}): vertex id out of range [1, {n}]")
            if u == v:
                raise DagError(f"edge {k + 1} ({u}, {v}): self-loop")
            out_adj[u].append(v)
            in_adj[v].append(u)
        self.out_adj = out_adj
        self.in_adj = in_adj
        self._topo = _kahn(n, out_adj, in_adj)
        if len(self._topo) < n:
            raise DagError(f"cycle detected through edge {_cycle_witness(n, in_adj, self._topo)}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def distinct_edges(self) -> set[tuple[int, int]]:
        return set(self.edges)

    def __repr__(self) -> str:
        return f"Dag(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Dag) and self.n == other.n and self.distinct_edges() == other.distinct_edges()

    def __hash__(self):
        return hash((self.n, frozenset(self.edges)))


def _kahn(n, out_adj, in_adj) -> list[int]:
    indeg = [len(a) for a in in_adj]
    queue = deque(v for v in range(1, n + 1) if indeg[v] == 0)
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in out_adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return order


def _cycle_witness(n, in_adj, partial) -> tuple[int, int]:
    # A leftover vertex always keeps a leftover predecessor, so walking
    # predecessors inside the leftover set must revisit a vertex.
    done = set(partial)
    u = next(v for v in range(1, n + 1) if v not in done)
    seen = set()
    while u not in seen:
        seen.add(u)
        w = next(x for x in in_adj[u] if x not in done)
        edge, u = (w, u), w
    return edge


def topological_order(g: Dag) -> list[int]:
    """Kahn's algorithm with a FIFO queue seeded by sources in id order."""
    return list(g._topo)


def longest_path(g: Dag) -> list[int]:
    """A maximum-vertex-count path; ties go to the smallest predecessor id."""
    if g.n == 0:
        return []
    length = [0] * (g.n + 1)
    back = [0] * (g.n + 1)
    for v in g._topo:
        best, arg = 0, 0
        for u in g.in_adj[v]:
            if length[u] > best or (length[u] == best and u < arg):
                best, arg = length[u], u
        length[v] = best + 1
        back[v] = arg
    end = max(range(1, g.n + 1), key=lambda v: (length[v], -v))
    path = [end]
    while back[path[-1]]:
        path.append(back[path[-1]])
    path.reverse()
    return path


@dataclass(frozen=True)
class Reduction:
    """Result of shortcutting a longest path.

    ``y`` lists the kept vertices (original ids) in the order of their new
    ids, so ``y[k - 1]`` is the original id of ``h``'s vertex ``k``.
    """

    path: tuple[int, ...]
    y: tuple[int, ...]
    h: Dag
    on_path: tuple[bool, ...]
    in_y: tuple[bool, ...]
    predecessor: dict[int, int]
    successor: dict[int, int]

    def to_x(self, k: int) -> int:
        return self.y[k - 1]

    @property
    def off_path(self) -> list[int]:
        return [v for v in range(1, len(self.on_path)) if not self.on_path[v]]


def reduce(g: Dag) -> Reduction:
    """Keep the off-path vertices plus their path predecessors and successors.

    The returned graph ``H`` is ``G`` induced on the kept set plus edges
    chaining the kept path vertices in path order (parallel edges dropped).
    """
    n = g.n
    path = longest_path(g)
    pos = [-1] * (n + 1)
    for k, v in enumerate(path):
        pos[v] = k
    on_path = [False] * (n + 1)
    for v in path:
        on_path[v] = True
    in_y = [False] * (n + 1)
    pred: dict[int, int] = {}
    succ: dict[int, int] = {}
    for u in range(1, n + 1):
        if on_path[u]:
            continue
        in_y[u] = True
        best = -1
        for w in g.in_adj[u]:
            if on_path[w] and pos[w] > best:
                best = pos[w]
        if best >= 0:
            pred[u] = path[best]
            in_y[path[best]] = True
        best = n + 1
        for w in g.out_adj[u]:
            if on_path[w] and pos[w] < best:
                best = pos[w]
        if best <= n:
            succ[u] = path[best]
            in_y[path[best]] = True

    # New ids follow G's topological order restricted to Y.
    y = [v for v in g._topo if in_y[v]]
    new_id = [0] * (n + 1)
    for k, v in enumerate(y, 1):
        new_id[v] = k
    h_edges = set()
    for u, v in g.edges:
        if in_y[u] and in_y[v]:
            h_edges.add((new_id[u], new_id[v]))
    prev = 0
    for v in path:
        if in_y[v]:
            if prev:
                h_edges.add((new_id[prev], new_id[v]))
            prev = v
    h = Dag(len(y), sorted(h_edges))
    return Reduction(tuple(path), tuple(y), h, tuple(on_path), tuple(in_y), pred, succ)


def parse_dag(text: str) -> Dag:
    lines = [(k, ln.split()) for k, ln in enumerate(text.splitlines(), 1)]
    lines = [(k, parts) for k, parts in lines if parts]
    if not lines:
        raise DagError("empty DAG file")
    k0, head = lines[0]
    if len(head) != 2:
        raise DagError(f"line {k0}: expected 'n m', got {' '.join(head)!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise DagError(f"line {k0}: expected integers 'n m'") from None
    if n < 0 or m < 0:
        raise DagError(f"line {k0}: negative count")
    body = lines[1:]
    if len(body) != m:
        raise DagError(f"header declares {m} edges, found {len(body)} edge lines")
    edges = []
    for k, parts in body:
        if len(parts) != 2:
            raise DagError(f"line {k}: expected 'u v', got {' '.join(parts)!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise DagError(f"line {k}: non-integer vertex id") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise DagError(f"line {k}: vertex id out of range [1, {n}]")
        if u == v:
            raise DagError(f"line {k}: self-loop on {u}")
        edges.append((u, v))
    return Dag(n, edges)


def format_dag(g: Dag) -> str:
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def parse_order(text: str, n: int | None = None) -> list[int]:
    try:
        ids = [int(tok) for tok in text.split()]
    except ValueError:
        raise DagError("order file: non-integer id") from None
    size = len(ids) if n is None else n
    if len(ids) != size or sorted(ids) != list(range(1, size + 1)):
        raise DagError(f"order file is not a permutation of 1..{size}")
    return ids


def format_order(order: Sequence[int]) -> str:
    return " ".join(map(str, order)) + "\n"
