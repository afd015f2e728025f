"""The Com-IC two-idea cascade: GAP parameters, reconsideration and simulation."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from comic import kernels
from comic.graph import DirectedGraph, check_seed_nodes

EQ_TOL = 1e-12


def close(x: float, y: float) -> bool:
    return abs(x - y) <= EQ_TOL


class ConfigError(ValueError):
    pass


class Mode(str, enum.Enum):
    COMPETING = "competing"
    COMPLEMENTARY = "complementary"


class State(enum.IntEnum):
    IDLE = 0
    ADOPTED = 1
    REJECTED = 2
    SUSPENDED = 3


@dataclass(frozen=True)
class GapParams:
    """Global adoption probabilities.

    ``q_a0`` is the chance a node adopts A when it has not adopted B, ``q_ab``
    the chance once B is adopted; ``q_b0`` and ``q_ba`` mirror them for B.
    """

    q_a0: float
    q_b0: float
    q_ab: float
    q_ba: float
    mode: Mode = Mode.COMPETING

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        for name in ("q_a0", "q_b0", "q_ab", "q_ba"):
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name}={value} outside [0, 1]")
            object.__setattr__(self, name, value)
        if self.mode is Mode.COMPETING:
            if self.q_ab > self.q_a0 + EQ_TOL or self.q_ba > self.q_b0 + EQ_TOL:
                raise ConfigError("competing mode needs q_a0 >= q_ab and q_b0 >= q_ba")
        elif self.q_ab < self.q_a0 - EQ_TOL or self.q_ba < self.q_b0 - EQ_TOL:
            raise ConfigError("complementary mode needs q_a0 <= q_ab and q_b0 <= q_ba")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.q_a0, self.q_b0, self.q_ab, self.q_ba)

    @classmethod
    def is_valid(cls, q_a0, q_b0, q_ab, q_ba, mode) -> bool:
        try:
            cls(q_a0, q_b0, q_ab, q_ba, mode)
        except ConfigError:
            return False
        return True


@dataclass(frozen=True)
class RhoParams:
    rho_a: float = 0.0
    rho_b: float = 0.0

    def __post_init__(self):
        for name in ("rho_a", "rho_b"):
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name}={value} outside [0, 1]")
            object.__setattr__(self, name, value)


def _rho(q_x0: float, q_xy: float) -> float:
    if q_x0 >= 1.0 or close(q_x0, q_xy):
        return 0.0
    return min(1.0, max(0.0, (q_xy - q_x0) / (1.0 - q_x0)))


def derive_rho(gap: GapParams) -> RhoParams:
    """Reconsideration probabilities that make adoption order-independent.

    Solves ``q_a0 + (1 - q_a0) q_b0 rho_a = (1 - q_b0) q_a0 + q_b0 q_ab`` for
    ``rho_a`` (and symmetrically for ``rho_b``). When ``q_a0 = 1`` the
    suspended state is unreachable and ``rho_a`` is 0.
    """
    if gap.mode is not Mode.COMPLEMENTARY:
        raise ConfigError("reconsideration probabilities are defined only for complementary ideas")
    return RhoParams(_rho(gap.q_a0, gap.q_ab), _rho(gap.q_b0, gap.q_ba))


@dataclass(frozen=True)
class ComicConfig:
    gap: GapParams
    reconsideration: bool = False
    rho: RhoParams | None = None

    def __post_init__(self):
        if self.reconsideration:
            if self.gap.mode is not Mode.COMPLEMENTARY:
                raise ConfigError("reconsideration requires complementary mode")
            if self.rho is None:
                object.__setattr__(self, "rho", derive_rho(self.gap))
        elif self.rho is not None:
            raise ConfigError("rho given without reconsideration")

    @classmethod
    def make(cls, q_a0, q_b0, q_ab, q_ba, mode="competing", reconsideration=False) -> "ComicConfig":
        return cls(GapParams(q_a0, q_b0, q_ab, q_ba, mode), reconsideration)

    def kernel_params(self) -> np.ndarray:
        rho = self.rho or RhoParams()
        return np.array([*self.gap.as_tuple(), rho.rho_a, rho.rho_b], dtype=np.float64)


@dataclass(frozen=True)
class SeedAssignment:
    """Seed sets per idea: ``(S_A, S_B)`` for Com-IC, ``(S_1, ..., S_m)`` for One-Shot."""

    sets: tuple[frozenset[int], ...]

    def __init__(self, *sets: Iterable[int]):
        object.__setattr__(self, "sets", tuple(frozenset(int(v) for v in s) for s in sets))

    def __getitem__(self, i: int) -> frozenset[int]:
        return self.sets[i]

    def __len__(self) -> int:
        return len(self.sets)

    def with_added(self, idea: int, *nodes: int) -> "SeedAssignment":
        sets = list(self.sets)
        sets[idea] = sets[idea] | set(nodes)
        return SeedAssignment(*sets)

    def validate(self, g: DirectedGraph, disjoint: bool = False) -> None:
        for i, s in enumerate(self.sets):
            check_seed_nodes(g, s, f"idea {i} seed")
        if disjoint:
            seen: set[int] = set()
            for s in self.sets:
                if seen & s:
                    raise ConfigError(f"seed sets overlap on {sorted(seen & s)}")
                seen |= s


@dataclass(frozen=True)
class NodeState:
    a_state: State
    b_state: State
    a_time: int | None
    b_time: int | None


@dataclass
class CascadeOutcome:
    a_state: np.ndarray
    b_state: np.ndarray
    a_time: np.ndarray
    b_time: np.ndarray
    trace: list | None = field(default=None, repr=False)

    @property
    def adopters_a(self) -> int:
        return int(np.count_nonzero(self.a_state == State.ADOPTED))

    @property
    def adopters_b(self) -> int:
        return int(np.count_nonzero(self.b_state == State.ADOPTED))

    def node(self, v: int) -> NodeState:
        at, bt = int(self.a_time[v]), int(self.b_time[v])
        return NodeState(State(int(self.a_state[v])), State(int(self.b_state[v])),
                         at if at >= 0 else None, bt if bt >= 0 else None)


def coin_bound(g: DirectedGraph) -> int:
    # one coin per edge, at most two primary and two reconsideration trials per node
    return g.edge_count + 4 * g.node_count + 1


def seed_masks(g: DirectedGraph, seeds: SeedAssignment) -> tuple[np.ndarray, np.ndarray]:
    if len(seeds) != 2:
        raise ConfigError("Com-IC takes exactly two seed sets")
    seeds.validate(g)
    is_a = np.zeros(g.node_count, dtype=np.int8)
    is_b = np.zeros(g.node_count, dtype=np.int8)
    is_a[list(seeds[0])] = 1
    is_b[list(seeds[1])] = 1
    return is_a, is_b


def simulate_comic(
    graph: DirectedGraph,
    seeds: SeedAssignment,
    config: ComicConfig,
    seed=None,
    trace: bool = False,
) -> CascadeOutcome:
    """Run one Com-IC cascade.

    Seeds adopt their idea at time 0 regardless of the GAP values. Each edge
    is live with its probability once per run, shared by both ideas. With
    ``trace=True`` the outcome carries every random decision as
    ``(kind, subject, p, outcome)``.
    """
    is_a, is_b = seed_masks(graph, seeds)
    uniforms = np.random.default_rng(seed).random(coin_bound(graph))
    a_state, b_state, a_time, b_time, tr = kernels.comic_simulate(
        graph.arrays, is_a, is_b, config.kernel_params(), config.reconsideration, uniforms, trace
    )
    return CascadeOutcome(a_state, b_state, a_time, b_time, tr)
