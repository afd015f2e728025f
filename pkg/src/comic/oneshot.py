"""The One-Shot model: each idle node considers only the first proposal it receives."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from comic import kernels
from comic.comic import ConfigError, SeedAssignment
from comic.graph import DirectedGraph

IDLE = -1
EXHAUSTED = -2


@dataclass(frozen=True)
class OneShotParams:
    q: tuple[float, ...]

    def __init__(self, q: Sequence[float]):
        q = tuple(float(x) for x in q)
        if not q:
            raise ConfigError("One-Shot needs at least one idea")
        for i, x in enumerate(q):
            if not 0.0 <= x <= 1.0:
                raise ConfigError(f"q[{i}]={x} outside [0, 1]")
        object.__setattr__(self, "q", q)

    @property
    def m(self) -> int:
        return len(self.q)


@dataclass
class OneShotOutcome:
    """Final per-node state: ``-1`` idle, ``-2`` exhausted, ``i >= 0`` adopted idea ``i``."""

    state: np.ndarray
    time: np.ndarray
    trace: list | None = field(default=None, repr=False)

    def adopters(self, idea: int) -> int:
        return int(np.count_nonzero(self.state == idea))


def seed_vector(g: DirectedGraph, seeds: SeedAssignment, params: OneShotParams) -> np.ndarray:
    if len(seeds) != params.m:
        raise ConfigError(f"{len(seeds)} seed sets given for {params.m} ideas")
    seeds.validate(g, disjoint=True)
    out = np.full(g.node_count, -1, dtype=np.int64)
    for i, s in enumerate(seeds.sets):
        out[list(s)] = i
    return out


def coin_bound(g: DirectedGraph) -> int:
    return g.edge_count + g.node_count + 1


def simulate_oneshot(
    graph: DirectedGraph,
    seeds: SeedAssignment,
    params: OneShotParams,
    seed=None,
    trace: bool = False,
) -> OneShotOutcome:
    si = seed_vector(graph, seeds, params)
    uniforms = np.random.default_rng(seed).random(coin_bound(graph))
    state, time, tr = kernels.oneshot_simulate(
        graph.arrays, si, np.asarray(params.q, dtype=np.float64), uniforms, trace
    )
    return OneShotOutcome(state, time, tr)
