"""Monte Carlo spread estimates and greedy seed selection."""

from __future__ import annotations

import heapq
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from comic import kernels
from comic import comic as comic_mod
from comic import oneshot as oneshot_mod
from comic.comic import ComicConfig, ConfigError, SeedAssignment
from comic.graph import DirectedGraph
from comic.oneshot import OneShotParams

Model = Union[ComicConfig, OneShotParams]

CHUNK_RUNS = 1024
_CHUNK_CELLS = 1 << 22


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    runs: int
    base_seed: int
    unreliable: bool = False

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "runs": self.runs,
            "base_seed": self.base_seed,
            "unreliable": self.unreliable,
        }


@dataclass
class _Moments:
    """Count, mean and sum of squared deviations; merges with Chan's update."""

    n: int
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def of(cls, x: np.ndarray) -> "_Moments":
        mean = x.mean(axis=0)
        return cls(x.shape[0], mean, ((x - mean) ** 2).sum(axis=0))

    def merge(self, other: "_Moments") -> "_Moments":
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * other.n / n
        m2 = self.m2 + other.m2 + delta**2 * self.n * other.n / n
        return _Moments(n, mean, m2)


@dataclass
class MonteCarloResult:
    """Per-idea spread estimates plus per-node adoption frequencies."""

    sigma: list[Estimate]
    per_node: np.ndarray
    runs: int
    base_seed: int

    def node_estimate(self, node: int, idea: int = 0) -> Estimate:
        p = float(self.per_node[node, idea])
        r = self.runs
        if r < 2:
            return Estimate(p, 0.0, r, self.base_seed, True)
        k = p * r
        var = (k - k * k / r) / (r - 1)
        return Estimate(p, math.sqrt(max(var, 0.0) / r), r, self.base_seed)

    def to_dict(self) -> dict:
        return {
            "runs": self.runs,
            "base_seed": self.base_seed,
            "sigma": [e.to_dict() for e in self.sigma],
            "per_node": self.per_node.tolist(),
        }


def _prepare(graph: DirectedGraph, seeds: SeedAssignment, model: Model):
    ga = graph.arrays
    if isinstance(model, ComicConfig):
        is_a, is_b = comic_mod.seed_masks(graph, seeds)
        params = model.kernel_params()
        recon = model.reconsideration
        bound = comic_mod.coin_bound(graph)

        def batch(u):
            return kernels.comic_batch(ga, is_a, is_b, params, recon, u)

        return batch, bound, 2
    if isinstance(model, OneShotParams):
        si = oneshot_mod.seed_vector(graph, seeds, model)
        q = np.asarray(model.q, dtype=np.float64)
        bound = oneshot_mod.coin_bound(graph)

        def batch(u):
            return kernels.oneshot_batch(ga, si, q, u)

        return batch, bound, model.m
    raise ConfigError(f"unsupported model configuration {model!r}")


def chunk_rows(bound: int) -> int:
    return max(1, min(CHUNK_RUNS, _CHUNK_CELLS // max(bound, 1)))


def chunk_uniforms(base_seed: int, chunk: int, rows: int, bound: int) -> np.ndarray:
    # counter-keyed stream: chunk c of base_seed never overlaps chunk c' != c
    bitgen = np.random.Philox(key=int(base_seed), counter=[0, 0, 0, int(chunk)])
    return np.random.Generator(bitgen).random((rows, bound))


def run_monte_carlo(
    graph: DirectedGraph,
    seeds: SeedAssignment,
    model: Model,
    runs: int,
    base_seed: int,
    workers: int = 1,
) -> MonteCarloResult:
    """Simulate ``runs`` cascades and aggregate per-idea and per-node statistics.

    Run ``r`` always draws from the same stream (chunk ``r // rows``, row
    ``r % rows``), so the result does not depend on ``workers``.
    """
    if runs < 1:
        raise ConfigError("runs must be at least 1")
    if base_seed < 0:
        raise ConfigError("base_seed must be nonnegative")
    batch, bound, m = _prepare(graph, seeds, model)
    rows = chunk_rows(bound)
    chunks = [(c, min(rows, runs - c * rows)) for c in range((runs + rows - 1) // rows)]

    def work(item):
        c, r = item
        u = chunk_uniforms(base_seed, c, rows, bound)[:r]
        sig, counts = batch(u)
        return _Moments.of(np.asarray(sig)), np.asarray(counts)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(item) for item in chunks]

    moments = parts[0][0]
    counts = parts[0][1].astype(np.int64)
    for mo, cnt in parts[1:]:
        moments = moments.merge(mo)
        counts = counts + cnt
    if runs > 1:
        stderr = np.sqrt(moments.m2 / (runs - 1) / runs)
    else:
        stderr = np.zeros(m)
    sigma = [
        Estimate(float(moments.mean[i]), float(stderr[i]), runs, base_seed, runs < 2) for i in range(m)
    ]
    return MonteCarloResult(sigma, counts / runs, runs, base_seed)


def estimate_sigma(
    graph: DirectedGraph,
    seeds: SeedAssignment,
    model: Model,
    runs: int,
    base_seed: int,
    idea: int = 0,
    target: int | None = None,
    workers: int = 1,
) -> Estimate:
    """Monte Carlo estimate of the expected number of adopters of ``idea``.

    With ``target`` set, estimates the probability that node ``target``
    adopts instead. A single run gives ``stderr = 0`` flagged unreliable.
    """
    res = run_monte_carlo(graph, seeds, model, runs, base_seed, workers)
    if target is not None:
        return res.node_estimate(target, idea)
    return res.sigma[idea]


# -- greedy -------------------------------------------------------------------


@dataclass
class GreedyResult:
    seeds: list[int]
    marginals: list[float]
    evaluations: int

    def to_dict(self) -> dict:
        return {"seeds": self.seeds, "marginals": self.marginals, "evaluations": self.evaluations}


def monte_carlo_objective(graph, model, base_seed, runs, idea=0, workers=1):
    def f(seeds: SeedAssignment) -> float:
        return estimate_sigma(graph, seeds, model, runs, base_seed, idea, workers=workers).mean

    return f


def exact_objective(graph, model, idea=0, budget=None):
    from comic.exact import exact_sigma_comic, exact_sigma_oneshot

    def f(seeds: SeedAssignment) -> float:
        if isinstance(model, ComicConfig):
            return exact_sigma_comic(graph, seeds, model, budget).sigma[idea]
        return exact_sigma_oneshot(graph, seeds, model, budget).sigma[idea]

    return f


def _regime_warning(model: Model, idea: int) -> str | None:
    from comic.submod import predict_submodular, setting_for_self

    setting, params = setting_for_self(model, idea)
    ok, _ = predict_submodular(setting, params)
    if ok:
        return None
    return (
        f"spread of idea {idea} is not submodular in its own seeds for {setting} at {params}; "
        "greedy carries no approximation guarantee here"
    )


def greedy_select(
    graph: DirectedGraph,
    model: Model,
    fixed_seeds: SeedAssignment,
    k: int,
    runs: int = 1000,
    base_seed: int = 0,
    lazy: bool = True,
    idea: int = 0,
    objective: Callable[[SeedAssignment], float] | None = None,
    workers: int = 1,
) -> GreedyResult:
    """Pick ``k`` seeds for ``idea`` by repeatedly taking the best marginal gain.

    Every evaluation reuses ``base_seed`` (common random numbers). With
    ``lazy=True`` stale gains act as upper bounds and only the current top
    candidate is re-evaluated. Ties go to the lower node id.
    """
    if k < 0:
        raise ConfigError("k must be nonnegative")
    f = objective or monte_carlo_objective(graph, model, base_seed, runs, idea, workers)
    taken: set[int] = set()
    for i, s in enumerate(fixed_seeds.sets):
        if i == idea or isinstance(model, OneShotParams):
            taken |= s
    candidates = [v for v in range(graph.node_count) if v not in taken]
    if k > len(candidates):
        raise ConfigError(f"k={k} exceeds the {len(candidates)} available candidate nodes")
    if k == 0:
        return GreedyResult([], [], 0)
    msg = _regime_warning(model, idea)
    if msg:
        warnings.warn(msg, stacklevel=2)

    current = fixed_seeds
    base = f(current)
    evals = 1
    chosen: list[int] = []
    gains: list[float] = []

    if not lazy:
        remaining = list(candidates)
        for _ in range(k):
            best, best_gain = None, -math.inf
            for v in remaining:
                g = f(current.with_added(idea, v)) - base
                evals += 1
                if g > best_gain:
                    best, best_gain = v, g
            chosen.append(best)
            gains.append(best_gain)
            remaining.remove(best)
            current = current.with_added(idea, best)
            base += best_gain
        return GreedyResult(chosen, gains, evals)

    heap = []
    for v in candidates:
        g = f(current.with_added(idea, v)) - base
        evals += 1
        heap.append((-g, v, 0))
    heapq.heapify(heap)
    round_ = 0
    while len(chosen) < k:
        neg, v, stamp = heapq.heappop(heap)
        if stamp == round_:
            chosen.append(v)
            gains.append(-neg)
            current = current.with_added(idea, v)
            base += -neg
            round_ += 1
            continue
        g = f(current.with_added(idea, v)) - base
        evals += 1
        heapq.heappush(heap, (-g, v, round_))
    return GreedyResult(chosen, gains, evals)
