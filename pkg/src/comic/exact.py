"""Exact spread for small instances.

Two independent routes:

* the decision tree walks every coin the cascade kernel can flip (edge
  liveness, adoption trials, reconsideration trials) and weights each leaf by
  the product of its branch probabilities;
* the threshold enumerator draws, per node and idea, the interval class of a
  uniform threshold and per edge its liveness, then runs a separate
  deterministic cascade in each world. It covers Com-IC without
  reconsideration only.

Both condition on the graph's tie-break order unless ``average_tiebreaks`` is
set, in which case the result is the mean over every in-edge permutation of
the nodes not listed in ``pinned``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from comic import kernels
from comic.comic import ComicConfig, ConfigError, Mode, SeedAssignment, seed_masks
from comic.graph import DirectedGraph, tiebreak_variants
from comic.kernels import BudgetExceeded
from comic.oneshot import OneShotParams, seed_vector

DEFAULT_BUDGET = 10**7


def default_budget() -> int:
    return int(os.environ.get("COMIC_BUDGET", DEFAULT_BUDGET))


@dataclass
class SigmaResult:
    """Expected adopters per idea plus per-node adoption probabilities.

    ``per_node[v, i]`` is the probability that node ``v`` ends up adopting
    idea ``i``; ``sigma[i]`` is its column sum.
    """

    sigma: tuple[float, ...]
    per_node: np.ndarray
    method: str
    leaves: int = 0
    total_weight: float = 1.0

    @property
    def sigma_a(self) -> float:
        return self.sigma[0]

    @property
    def sigma_b(self) -> float:
        return self.sigma[1]

    def at(self, node: int, idea: int = 0) -> float:
        return float(self.per_node[node, idea])

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "sigma": list(self.sigma),
            "per_node": self.per_node.tolist(),
            "leaves": self.leaves,
            "total_weight": self.total_weight,
        }


def _finish(per: np.ndarray, method: str, leaves: int, total: float) -> SigmaResult:
    per = np.clip(per, 0.0, 1.0)
    return SigmaResult(tuple(float(x) for x in per.sum(axis=0)), per, method, leaves, total)


def _variants(graph: DirectedGraph, average: bool, pinned: Iterable[int]):
    if not average:
        return [graph]
    pinned = set(pinned)
    nodes = [v for v in range(graph.node_count) if graph.in_degree(v) >= 2 and v not in pinned]
    return list(tiebreak_variants(graph, nodes))


def _average(results: list[SigmaResult], method: str) -> SigmaResult:
    if len(results) == 1:
        return results[0]
    per = np.mean([r.per_node for r in results], axis=0)
    return SigmaResult(
        tuple(float(x) for x in per.sum(axis=0)),
        per,
        method,
        sum(r.leaves for r in results),
        float(np.mean([r.total_weight for r in results])),
    )


def exact_sigma_comic(
    graph: DirectedGraph,
    seeds: SeedAssignment,
    config: ComicConfig,
    budget: int | None = None,
    average_tiebreaks: bool = False,
    pinned: Iterable[int] = (),
) -> SigmaResult:
    budget = default_budget() if budget is None else budget
    params = config.kernel_params()
    out = []
    for g in _variants(graph, average_tiebreaks, pinned):
        is_a, is_b = seed_masks(g, seeds)
        per, total, leaves = kernels.comic_exact(g.arrays, is_a, is_b, params, config.reconsideration, budget)
        out.append(_finish(np.asarray(per), "decision-tree", int(leaves), float(total)))
    return _average(out, "decision-tree")


def exact_sigma_oneshot(
    graph: DirectedGraph,
    seeds: SeedAssignment,
    params: OneShotParams,
    budget: int | None = None,
    average_tiebreaks: bool = False,
    pinned: Iterable[int] = (),
) -> SigmaResult:
    budget = default_budget() if budget is None else budget
    q = np.asarray(params.q, dtype=np.float64)
    out = []
    for g in _variants(graph, average_tiebreaks, pinned):
        si = seed_vector(g, seeds, params)
        per, total, leaves = kernels.oneshot_exact(g.arrays, si, q, budget)
        out.append(_finish(np.asarray(per), "decision-tree", int(leaves), float(total)))
    return _average(out, "decision-tree")


# -- threshold worlds --------------------------------------------------------


def threshold_classes(q_alone: float, q_helped: float) -> list[tuple[int, float]]:
    """Interval classes of a uniform threshold against the two adoption levels.

    Class 0 accepts under either level, class 1 only under the larger one,
    class 2 under neither. Zero-probability classes are dropped.
    """
    lo, hi = min(q_alone, q_helped), max(q_alone, q_helped)
    return [(c, p) for c, p in ((0, lo), (1, hi - lo), (2, 1.0 - hi)) if p > 0.0]


class _Need(Exception):
    def __init__(self, key, options):
        self.key = key
        self.options = options


def _accepts(cls: int, q_used: float, q_alone: float, q_helped: float) -> bool:
    if cls == 0:
        return True
    if cls == 2:
        return False
    return q_used == max(q_alone, q_helped)


def _threshold_cascade(graph, seeds_a, seeds_b, gap, world):
    """Deterministic Com-IC cascade given (part of) a threshold world.

    Raises ``_Need`` the first time an unassigned world factor is consulted.
    """
    n = graph.node_count
    q = {0: (gap.q_a0, gap.q_ab), 1: (gap.q_b0, gap.q_ba)}
    adopted = [set(seeds_a), set(seeds_b)]
    decided = [set(seeds_a), set(seeds_b)]  # adopted or rejected, per idea
    fired = [(v, 0) for v in sorted(seeds_a)]
    fired += [(v, 1) for v in sorted(seeds_b)]
    fired.sort(key=lambda x: x[0])  # stable: a dual seed keeps A before B
    out_edges = [[] for _ in range(n)]
    for e, (s, d, _) in enumerate(graph.edges):
        out_edges[s].append(e)

    def factor(key, options):
        if key not in world:
            raise _Need(key, options)
        return world[key]

    while fired:
        inbox: dict[int, list] = {}
        order_seen: dict[int, int] = {}
        for v, idea in fired:
            sub = order_seen.get(v, 0)
            order_seen[v] = sub + 1
            for e in out_edges[v]:
                d = graph.edges[e][1]
                inbox.setdefault(d, []).append((graph.in_order[d].index(e), sub, idea, e))
        fired = []
        for u in sorted(inbox):
            for _, _, idea, e in sorted(inbox[u]):
                if u in decided[idea]:
                    continue
                p = graph.edges[e][2]
                if p < 1.0:
                    live = factor(("edge", e), [(True, p), (False, 1.0 - p)] if p > 0 else [(False, 1.0)])
                    if not live:
                        continue
                q_alone, q_helped = q[idea]
                q_used = q_helped if u in adopted[1 - idea] else q_alone
                cls = factor(("alpha", idea, u), threshold_classes(q_alone, q_helped))
                decided[idea].add(u)
                if _accepts(cls, q_used, q_alone, q_helped):
                    adopted[idea].add(u)
                    fired.append((u, idea))
    return adopted


def threshold_enum_sigma(
    graph: DirectedGraph,
    seeds: SeedAssignment,
    config: ComicConfig,
    budget: int | None = None,
) -> SigmaResult:
    """Exact Com-IC spread by summing over threshold possible worlds.

    World factors are materialised only when the cascade consults them;
    factors never consulted marginalise out, so the sum equals the full
    enumeration over every class assignment and edge realisation.
    """
    if config.reconsideration:
        raise ConfigError("the threshold enumerator does not model reconsideration")
    budget = default_budget() if budget is None else budget
    seeds.validate(graph)
    n = graph.node_count
    per = np.zeros((n, 2))
    comp = np.zeros((n, 2))
    leaves = 0
    weights = []
    stack = [({}, 1.0)]
    while stack:
        world, w = stack.pop()
        try:
            adopted = _threshold_cascade(graph, seeds[0], seeds[1], config.gap, world)
        except _Need as need:
            for value, p in need.options:
                child = dict(world)
                child[need.key] = value
                stack.append((child, w * p))
            continue
        leaves += 1
        if leaves > budget:
            raise BudgetExceeded(leaves, budget)
        weights.append(w)
        for idea in (0, 1):
            for v in adopted[idea]:
                y = w - comp[v, idea]
                t = per[v, idea] + y
                comp[v, idea] = (t - per[v, idea]) - y
                per[v, idea] = t
    return _finish(per, "threshold-enum", leaves, math.fsum(weights))
