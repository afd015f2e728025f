"""Directed probabilistic graphs shared by every cascade engine.

Nodes are dense integers ``0..n-1``. Each node carries a tie-break order over
its in-edges: when several proposals reach a node in the same time step they
are processed in that order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graph text or an invalid graph description."""


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    node_count: int
    edges: tuple[tuple[int, int, float], ...]
    in_order: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        n = self.node_count
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise GraphError(f"node count must be a nonnegative integer, got {n!r}")
        edges = tuple((int(s), int(d), float(p)) for s, d, p in self.edges)
        seen = set()
        for i, (s, d, p) in enumerate(edges):
            if not (0 <= s < n and 0 <= d < n):
                raise GraphError(f"edge {i} ({s}, {d}) has an endpoint outside 0..{n - 1}")
            if (s, d) in seen:
                raise GraphError(f"duplicate edge ({s}, {d})")
            if not 0.0 <= p <= 1.0:
                raise GraphError(f"edge ({s}, {d}) probability {p} outside [0, 1]")
            seen.add((s, d))
        object.__setattr__(self, "node_count", int(n))
        object.__setattr__(self, "edges", edges)

        incoming: list[list[int]] = [[] for _ in range(n)]
        for i, (_, d, _) in enumerate(edges):
            incoming[d].append(i)
        if not self.in_order:
            order = tuple(tuple(lst) for lst in incoming)
        else:
            order = tuple(tuple(int(e) for e in lst) for lst in self.in_order)
            if len(order) != n:
                raise GraphError("in_order must have one entry per node")
            for v in range(n):
                if sorted(order[v]) != incoming[v]:
                    raise GraphError(f"in_order[{v}] is not a permutation of the in-edges of {v}")
        object.__setattr__(self, "in_order", order)

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (self.node_count, self.edges, self.in_order) == (
            other.node_count,
            other.edges,
            other.in_order,
        )

    def __hash__(self):
        return hash((self.node_count, self.edges, self.in_order))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def with_in_order(self, in_order: Sequence[Sequence[int]]) -> "DirectedGraph":
        return DirectedGraph(self.node_count, self.edges, tuple(tuple(o) for o in in_order))

    def in_degree(self, node: int) -> int:
        return len(self.in_order[node])

    def edge_index(self, src: int, dst: int) -> int:
        for i, (s, d, _) in enumerate(self.edges):
            if s == src and d == dst:
                return i
        raise KeyError((src, dst))

    @cached_property
    def arrays(self) -> "GraphArrays":
        return GraphArrays.from_graph(self)


@dataclass(frozen=True, eq=False)
class GraphArrays:
    """CSR view consumed by the cascade kernels.

    ``out_start``/``out_edge`` list edge ids by source in insertion order;
    ``in_rank[e]`` is the position of edge ``e`` in its destination's
    tie-break order.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    prob: np.ndarray
    out_start: np.ndarray
    out_edge: np.ndarray
    in_rank: np.ndarray
    max_in_degree: int

    @classmethod
    def from_graph(cls, g: DirectedGraph) -> "GraphArrays":
        m = g.edge_count
        src = np.fromiter((e[0] for e in g.edges), dtype=np.int64, count=m)
        dst = np.fromiter((e[1] for e in g.edges), dtype=np.int64, count=m)
        prob = np.fromiter((e[2] for e in g.edges), dtype=np.float64, count=m)
        counts = np.bincount(src, minlength=g.node_count) if m else np.zeros(g.node_count, np.int64)
        out_start = np.zeros(g.node_count + 1, dtype=np.int64)
        np.cumsum(counts, out=out_start[1:])
        # stable sort keeps insertion order within a source
        out_edge = np.argsort(src, kind="stable").astype(np.int64)
        in_rank = np.zeros(m, dtype=np.int64)
        for order in g.in_order:
            for r, e in enumerate(order):
                in_rank[e] = r
        max_in = max((len(o) for o in g.in_order), default=0)
        return cls(g.node_count, src, dst, prob, out_start, out_edge, in_rank, max(max_in, 1))


def parse_graph(text: str) -> DirectedGraph:
    """Parse the edge-list format.

    The first non-comment line holds the node count; every further
    non-comment line is ``src dst [prob]`` with ``prob`` defaulting to 1.0.
    Lines starting with ``#`` are comments.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((lineno, stripped.split()))
    if not lines:
        raise GraphError("missing node count line")
    lineno, head = lines[0]
    if len(head) != 1:
        raise GraphError(f"line {lineno}: expected a single node count")
    n = _parse_node_id(head[0], lineno, "node count")
    edges = []
    for lineno, parts in lines[1:]:
        if len(parts) not in (2, 3):
            raise GraphError(f"line {lineno}: expected 'src dst [prob]'")
        s = _parse_node_id(parts[0], lineno, "source")
        d = _parse_node_id(parts[1], lineno, "destination")
        p = 1.0
        if len(parts) == 3:
            try:
                p = float(parts[2])
            except ValueError:
                raise GraphError(f"line {lineno}: bad probability {parts[2]!r}") from None
            if not 0.0 <= p <= 1.0:
                raise GraphError(f"line {lineno}: probability {p} outside [0, 1]")
        edges.append((s, d, p))
    try:
        return DirectedGraph(n, tuple(edges))
    except GraphError as exc:
        raise GraphError(str(exc)) from None


def _parse_node_id(token: str, lineno: int, what: str) -> int:
    if not token.isdigit():
        raise GraphError(f"line {lineno}: {what} {token!r} is not a nonnegative integer")
    return int(token)


def serialize_graph(g: DirectedGraph) -> str:
    # repr() of a float is the shortest string that round-trips exactly
    out = [str(g.node_count)]
    out.extend(f"{s} {d} {p!r}" for s, d, p in g.edges)
    return "\n".join(out) + "\n"


def load_graph(path) -> DirectedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def fix_tiebreak(g: DirectedGraph, seed) -> DirectedGraph:
    """Return ``g`` with every in-edge order replaced by a seeded uniform shuffle."""
    rng = random.Random(seed)
    order = []
    for lst in g.in_order:
        lst = list(lst)
        rng.shuffle(lst)
        order.append(tuple(lst))
    return g.with_in_order(order)


def out_neighbors(g: DirectedGraph, node: int) -> list[tuple[int, float]]:
    if not 0 <= node < g.node_count:
        raise GraphError(f"node {node} out of range 0..{g.node_count - 1}")
    a = g.arrays
    return [
        (int(a.dst[e]), float(a.prob[e])) for e in a.out_edge[a.out_start[node] : a.out_start[node + 1]]
    ]


def check_seed_nodes(g: DirectedGraph, seeds: Iterable[int], label: str = "seed") -> frozenset[int]:
    out = frozenset(int(s) for s in seeds)
    for s in out:
        if not 0 <= s < g.node_count:
            raise GraphError(f"{label} node {s} out of range 0..{g.node_count - 1}")
    return out


def tiebreak_variants(g: DirectedGraph, nodes: Iterable[int] | None = None, limit: int = 4096):
    """Yield ``g`` under every combination of in-edge orders at ``nodes``.

    ``nodes`` defaults to every node with in-degree at least two.
    """
    from itertools import permutations, product

    if nodes is None:
        nodes = [v for v in range(g.node_count) if g.in_degree(v) >= 2]
    nodes = list(nodes)
    choices = [list(permutations(g.in_order[v])) for v in nodes]
    total = 1
    for c in choices:
        total *= len(c)
    if total > limit:
        raise GraphError(f"{total} tie-break permutations exceed the limit of {limit}")
    for combo in product(*choices):
        order = list(g.in_order)
        for v, perm in zip(nodes, combo):
            order[v] = perm
        yield g.with_in_order(order)
