"""Submodularity characterisations: counterexamples, closed forms, predicates, probes.

Every setting pairs a parameter region with a counterexample graph on which
the marginal gain of a candidate seed ``u`` is measured at a target node ``t``
with and without a companion seed ``v``:

    M1 = sigma_t(S + u) - sigma_t(S)
    M2 = sigma_t(S + u + v) - sigma_t(S + v)

A positive ``M2 - M1`` witnesses a failure of submodularity.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from comic.comic import EQ_TOL, ComicConfig, ConfigError, GapParams, Mode, SeedAssignment, close
from comic.exact import exact_sigma_comic, exact_sigma_oneshot
from comic.graph import DirectedGraph, fix_tiebreak, serialize_graph
from comic.oneshot import OneShotParams

VIOLATION_TOL = 1e-9
AGREEMENT_TOL = 1e-10


class Setting(str, enum.Enum):
    COMPETING_SELF = "competing-self"
    COMPLEMENTARY_SELF_NORECON = "complementary-self-norecon"
    COMPLEMENTARY_SELF_RECON = "complementary-self-recon"
    COMPLEMENTARY_CROSS_NORECON = "complementary-cross-norecon"
    COMPLEMENTARY_CROSS_RECON = "complementary-cross-recon"
    ONESHOT = "oneshot"

    @property
    def is_oneshot(self) -> bool:
        return self is Setting.ONESHOT

    @property
    def mode(self) -> Mode | None:
        if self is Setting.ONESHOT:
            return None
        return Mode.COMPETING if self is Setting.COMPETING_SELF else Mode.COMPLEMENTARY

    @property
    def reconsideration(self) -> bool:
        return self in (Setting.COMPLEMENTARY_SELF_RECON, Setting.COMPLEMENTARY_CROSS_RECON)

    @property
    def cross(self) -> bool:
        return self in (Setting.COMPLEMENTARY_CROSS_NORECON, Setting.COMPLEMENTARY_CROSS_RECON)

    @property
    def figure(self) -> str:
        return _FIGURE[self]


_FIGURE = {
    Setting.COMPETING_SELF: "fig1",
    Setting.COMPLEMENTARY_SELF_NORECON: "fig1",
    Setting.COMPLEMENTARY_SELF_RECON: "fig2",
    Setting.COMPLEMENTARY_CROSS_NORECON: "fig3",
    Setting.COMPLEMENTARY_CROSS_RECON: "fig3",
    Setting.ONESHOT: "fig4",
}

FIGURES = ("fig1", "fig2", "fig3", "fig4")


@dataclass(frozen=True)
class MarginalPair:
    m1: float
    m2: float

    @property
    def gap(self) -> float:
        return self.m2 - self.m1

    def to_dict(self) -> dict:
        return {"m1": self.m1, "m2": self.m2, "gap": self.gap}


@dataclass(frozen=True)
class Counterexample:
    """A named counterexample instance.

    ``augment`` is the idea whose seed set receives ``u`` and ``v``;
    ``measure`` is the idea whose adoption at ``target`` is measured.
    ``pinned`` lists nodes whose in-edge order is part of the construction
    and is not averaged over.
    """

    name: str
    graph: DirectedGraph
    seeds: SeedAssignment
    u: int
    v: int
    target: int
    augment: int
    measure: int = 0
    k: int | None = None
    names: dict[str, int] = field(default_factory=dict)
    pinned: tuple[int, ...] = ()


def _chain_graph(names: list[str], chains: list[list[str]]) -> tuple[DirectedGraph, dict[str, int]]:
    ids = {name: i for i, name in enumerate(names)}
    edges = []
    for chain in chains:
        edges.extend((ids[a], ids[b], 1.0) for a, b in zip(chain, chain[1:]))
    return DirectedGraph(len(names), tuple(edges)), ids


def build_counterexample(name: str, k: int | None = None) -> Counterexample:
    """Construct one of the four counterexample instances.

    * ``fig1``: ``u`` reaches ``t`` through three intermediate nodes; ``a -> w -> t``
      and ``b -> v -> w``. S_A = {a}, S_B = {b}; u and v augment S_A.
    * ``fig2``: path ``b -> v -> a1 -> u -> a2 -> t``. S_A = {a1, a2}, S_B = {b}.
    * ``fig3``: path ``a -> v -> b -> t`` with ``u`` the same node as ``t``.
      S_A = {a}, S_B = {b}; u and v augment S_B.
    * ``fig4`` (One-Shot, ideas ``i = 0`` and ``j = 1``): ``u -> x1 -> .. -> x_{k+2} -> t``
      and ``j -> v -> y1 -> .. -> y_{k+1} -> t``. S_j = {j}; u and v augment S_i.
      The j-side proposal and the u-side proposal reach ``t`` in the same step;
      ``t`` processes the j-side edge first and that order is pinned.
    """
    if name not in FIGURES:
        raise ConfigError(f"unknown counterexample {name!r}; choose from {', '.join(FIGURES)}")
    if name == "fig4":
        if k is None or int(k) != k or k < 0:
            raise ConfigError("fig4 needs a path parameter k >= 0")
        k = int(k)
    elif k is not None:
        raise ConfigError(f"{name} takes no path parameter")

    if name == "fig1":
        names = ["u", "x1", "x2", "x3", "a", "b", "w", "v", "t"]
        g, ids = _chain_graph(names, [["u", "x1", "x2", "x3", "t"], ["a", "w", "t"], ["b", "v", "w"]])
        return Counterexample(name, g, SeedAssignment({ids["a"]}, {ids["b"]}), ids["u"], ids["v"],
                              ids["t"], augment=0, names=ids)
    if name == "fig2":
        names = ["b", "v", "a1", "u", "a2", "t"]
        g, ids = _chain_graph(names, [names])
        return Counterexample(name, g, SeedAssignment({ids["a1"], ids["a2"]}, {ids["b"]}), ids["u"],
                              ids["v"], ids["t"], augment=0, names=ids)
    if name == "fig3":
        names = ["a", "v", "b", "t"]
        g, ids = _chain_graph(names, [names])
        ids["u"] = ids["t"]
        return Counterexample(name, g, SeedAssignment({ids["a"]}, {ids["b"]}), ids["u"], ids["v"],
                              ids["t"], augment=1, names=ids)

    xs = [f"x{i}" for i in range(1, k + 3)]
    ys = [f"y{i}" for i in range(1, k + 2)]
    names = ["u", *xs, "j", "v", *ys, "t"]
    # j-side chain listed first so t's default in-edge order handles it first
    g, ids = _chain_graph(names, [["j", "v", *ys, "t"], ["u", *xs, "t"]])
    return Counterexample(name, g, SeedAssignment(set(), {ids["j"]}), ids["u"], ids["v"], ids["t"],
                          augment=0, k=k, names=ids, pinned=(ids["t"],))


# -- closed forms ---------------------------------------------------------------


def _gap_tuple(params) -> tuple[float, float, float, float]:
    if isinstance(params, GapParams):
        return params.as_tuple()
    if isinstance(params, ComicConfig):
        return params.gap.as_tuple()
    values = tuple(float(x) for x in params)
    if len(values) != 4:
        raise ConfigError("expected four GAP values (q_a0, q_b0, q_ab, q_ba)")
    return values


def _oneshot_pair(params) -> tuple[float, float]:
    if isinstance(params, OneShotParams):
        params = params.q
    values = tuple(float(x) for x in params)
    if len(values) != 2:
        raise ConfigError("fig4 takes exactly two strengths (q_i, q_j)")
    return values


def closed_form_margins(name: str, params, k: int | None = None) -> MarginalPair:
    """Evaluate the analytic M1 and M2 of a counterexample."""
    if name == "fig4":
        if k is None or k < 0:
            raise ConfigError("fig4 needs a path parameter k >= 0")
        qi, qj = _oneshot_pair(params)
        return MarginalPair(qi ** (k + 3) * (1 - qj ** (k + 2)), qi ** (k + 3) * (1 - qi ** (k + 1)))
    if name not in FIGURES:
        raise ConfigError(f"unknown counterexample {name!r}")
    if isinstance(params, OneShotParams):
        raise ConfigError(f"{name} needs Com-IC GAP values")
    a0, b0, ab, ba = _gap_tuple(params)
    if name == "fig1":
        if not (GapParams.is_valid(a0, b0, ab, ba, Mode.COMPETING)
                or GapParams.is_valid(a0, b0, ab, ba, Mode.COMPLEMENTARY)):
            raise ConfigError("fig1 needs competing or complementary GAP values")
        m1 = (1 - a0) * ((1 - b0**3) * a0**4 + b0**3 * a0**3 * ab)
        m2 = (1 - a0) * ((1 - b0 * ba * b0) * a0**4 + b0 * ba * b0 * a0**3 * ab)
        return MarginalPair(m1, m2)
    if not GapParams.is_valid(a0, b0, ab, ba, Mode.COMPLEMENTARY):
        raise ConfigError(f"{name} needs complementary GAP values")
    if name == "fig2":
        m1 = (1 - a0) * b0 * ba * (ba - b0) * ba * b0 * (ab - a0)
        m2 = (1 - a0) * ba * ba * (ba - b0) * ba * b0 * (ab - a0)
        return MarginalPair(m1, m2)
    m1 = (1 - b0) * a0 * ab * (ab - a0)
    m2 = (1 - b0) * ab * ab * (ab - a0)
    return MarginalPair(m1, m2)


def gap_formula(name: str, params, k: int | None = None) -> float:
    """The factored ``M2 - M1`` for a counterexample."""
    if name == "fig4":
        qi, qj = _oneshot_pair(params)
        return qi ** (k + 3) * (qj ** (k + 2) - qi ** (k + 1))
    a0, b0, ab, ba = _gap_tuple(params)
    if name == "fig1":
        return a0**3 * b0**2 * (1 - a0) * (ab - a0) * (ba - b0)
    if name == "fig2":
        return (1 - a0) * (ba - b0) ** 2 * ba**2 * b0 * (ab - a0)
    if name == "fig3":
        return (ab - a0) ** 2 * (1 - b0) * ab
    raise ConfigError(f"unknown counterexample {name!r}")


# -- predicates -----------------------------------------------------------------


def predict_submodular(setting, params, idea: int = 0) -> tuple[bool, list[str]]:
    """Whether the characterisation predicts submodularity, and which conditions hold.

    Com-IC settings take ``(q_a0, q_b0, q_ab, q_ba)`` and concern the spread of
    A. The One-Shot setting takes the strengths ``q`` and the index ``idea``.
    """
    setting = Setting(setting)
    if setting.is_oneshot:
        q = params.q if isinstance(params, OneShotParams) else tuple(float(x) for x in params)
        qi = q[idea]
        held = []
        if all(qi >= qj - EQ_TOL for qj in q):
            held.append("q_i >= q_j for all j")
        if close(qi, 0.0):
            held.append("q_i = 0")
        return bool(held), held

    a0, b0, ab, ba = _gap_tuple(params)
    checks = {
        "q_a0 = 1": close(a0, 1.0),
        "q_a0 = 0": close(a0, 0.0),
        "q_b0 = 0": close(b0, 0.0),
        "q_b0 = 1": close(b0, 1.0),
        "q_a0 = q_ab": close(a0, ab),
        "q_b0 = q_ba": close(b0, ba),
    }
    wanted = {
        Setting.COMPETING_SELF: ["q_a0 = 1", "q_a0 = q_ab", "q_b0 = q_ba"],
        Setting.COMPLEMENTARY_SELF_NORECON: ["q_a0 = 0", "q_b0 = 0", "q_a0 = q_ab", "q_b0 = q_ba"],
        Setting.COMPLEMENTARY_SELF_RECON: ["q_a0 = q_ab", "q_b0 = q_ba", "q_b0 = 0"],
        Setting.COMPLEMENTARY_CROSS_NORECON: ["q_a0 = q_ab", "q_b0 = 1"],
        Setting.COMPLEMENTARY_CROSS_RECON: ["q_a0 = q_ab", "q_b0 = 1"],
    }[setting]
    held = [c for c in wanted if checks[c]]
    return bool(held), held


def setting_for_self(model, idea: int = 0):
    """The self-submodularity setting (and A-centred parameters) for ``idea``."""
    if isinstance(model, OneShotParams):
        return Setting.ONESHOT, tuple(model.q[idea:idea + 1] + model.q[:idea] + model.q[idea + 1:])
    g = model.gap
    params = g.as_tuple() if idea == 0 else (g.q_b0, g.q_a0, g.q_ba, g.q_ab)
    if g.mode is Mode.COMPETING:
        return Setting.COMPETING_SELF, params
    if model.reconsideration:
        return Setting.COMPLEMENTARY_SELF_RECON, params
    return Setting.COMPLEMENTARY_SELF_NORECON, params


def choose_k(q_i: float, q_j: float) -> int:
    """Smallest ``k >= 0`` with ``q_j ** (k + 2) > q_i ** (k + 1)``."""
    if not (0.0 < q_i < q_j <= 1.0):
        raise ConfigError("choose_k needs 0 < q_i < q_j <= 1")
    # closed-form estimate, then settle on the exact float boundary
    k = max(0, math.ceil(math.log(q_j) / math.log(q_i / q_j)) - 2)
    ok = lambda k: q_j ** (k + 2) > q_i ** (k + 1)  # noqa: E731
    while k > 0 and ok(k - 1):
        k -= 1
    while not ok(k):
        k += 1
        if k > 10**6:
            raise ConfigError("no k found below 10**6")
    return k


# -- measurement ----------------------------------------------------------------


def _setting_for(cex: Counterexample, params, setting) -> Setting:
    if setting is not None:
        setting = Setting(setting)
        if setting.figure != cex.name:
            raise ConfigError(f"setting {setting.value} is measured on {setting.figure}, not {cex.name}")
        return setting
    if cex.name == "fig4":
        return Setting.ONESHOT
    if cex.name == "fig2":
        return Setting.COMPLEMENTARY_SELF_RECON
    if cex.name == "fig3":
        return Setting.COMPLEMENTARY_CROSS_NORECON
    a0, b0, ab, ba = _gap_tuple(params)
    if GapParams.is_valid(a0, b0, ab, ba, Mode.COMPETING):
        return Setting.COMPETING_SELF
    return Setting.COMPLEMENTARY_SELF_NORECON


def model_for(setting: Setting, params):
    setting = Setting(setting)
    if setting.is_oneshot:
        return params if isinstance(params, OneShotParams) else OneShotParams(params)
    return ComicConfig(GapParams(*_gap_tuple(params), setting.mode), setting.reconsideration)


def _sigma_t(cex: Counterexample, model, seeds: SeedAssignment, budget) -> float:
    if isinstance(model, OneShotParams):
        res = exact_sigma_oneshot(cex.graph, seeds, model, budget, average_tiebreaks=True, pinned=cex.pinned)
    else:
        res = exact_sigma_comic(cex.graph, seeds, model, budget, average_tiebreaks=True, pinned=cex.pinned)
    return res.at(cex.target, cex.measure)


def marginal_pair(cex: Counterexample, model, budget: int | None = None,
                  seeds: SeedAssignment | None = None) -> MarginalPair:
    seeds = cex.seeds if seeds is None else seeds
    i = cex.augment
    base = _sigma_t(cex, model, seeds, budget)
    with_u = _sigma_t(cex, model, seeds.with_added(i, cex.u), budget)
    with_v = _sigma_t(cex, model, seeds.with_added(i, cex.v), budget)
    with_uv = _sigma_t(cex, model, seeds.with_added(i, cex.u, cex.v), budget)
    return MarginalPair(with_u - base, with_uv - with_v)


def measure_violation(cex: Counterexample, params, setting=None, budget: int | None = None) -> MarginalPair:
    """Exact M1 and M2 at the counterexample's target.

    Each spread is averaged over every in-edge order of the non-pinned nodes,
    so it matches the expectation over random tie-breaking.
    """
    setting = _setting_for(cex, params, setting)
    return marginal_pair(cex, model_for(setting, params), budget)


# -- sweeps ---------------------------------------------------------------------


@dataclass
class SweepRow:
    params: tuple[float, ...]
    predicted: bool
    pair: MarginalPair
    k: int | None = None

    @property
    def gap(self) -> float:
        return self.pair.gap

    @property
    def agree(self) -> bool:
        return self.predicted == (self.gap <= VIOLATION_TOL)

    def to_dict(self, setting: Setting) -> dict:
        if setting.is_oneshot:
            head = {"q_i": self.params[0], "q_j": self.params[1], "k": self.k}
        else:
            head = dict(zip(("q_a0", "q_b0", "q_ab", "q_ba"), self.params))
        return {**head, "predicted": self.predicted, "m1": self.pair.m1, "m2": self.pair.m2,
                "gap": self.gap, "agree": self.agree}


def grid_values(step: float) -> list[float]:
    count = round(1.0 / step)
    if count <= 0 or abs(count * step - 1.0) > 1e-9:
        raise ConfigError(f"grid step {step} does not divide 1 evenly")
    return [i / count for i in range(count + 1)]


def oneshot_k(q_i: float, q_j: float, policy="auto") -> int:
    if policy != "auto":
        return int(policy)
    if 0.0 < q_i < q_j:
        return choose_k(q_i, q_j)
    return 0


def sweep_points(setting, step: float) -> list[tuple[float, ...]]:
    setting = Setting(setting)
    vals = grid_values(step)
    if setting.is_oneshot:
        return [(qi, qj) for qi in vals for qj in vals]
    return [
        p
        for p in ((a0, b0, ab, ba) for a0 in vals for b0 in vals for ab in vals for ba in vals)
        if GapParams.is_valid(*p, setting.mode)
    ]


def sweep_row(setting, params, k_policy="auto", budget: int | None = None) -> SweepRow:
    setting = Setting(setting)
    predicted, _ = predict_submodular(setting, params)
    if setting.is_oneshot:
        k = oneshot_k(params[0], params[1], k_policy)
        cex = build_counterexample("fig4", k)
        return SweepRow(tuple(params), predicted, measure_violation(cex, params, setting, budget), k)
    cex = build_counterexample(setting.figure)
    return SweepRow(tuple(params), predicted, measure_violation(cex, params, setting, budget))


def sweep_gap(setting, step: float = 0.25, k_policy="auto", budget: int | None = None,
              workers: int = 1) -> list[SweepRow]:
    """Predicted versus measured violation on every valid grid point of a setting."""
    setting = Setting(setting)
    points = sweep_points(setting, step)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda p: sweep_row(setting, p, k_policy, budget), points))
    return [sweep_row(setting, p, k_policy, budget) for p in points]


SWEEP_COLUMNS_COMIC = ["q_a0", "q_b0", "q_ab", "q_ba", "predicted", "m1", "m2", "gap", "agree"]
SWEEP_COLUMNS_ONESHOT = ["q_i", "q_j", "k", "predicted", "m1", "m2", "gap", "agree"]


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


def sweep_csv(setting, rows: Sequence[SweepRow]) -> str:
    setting = Setting(setting)
    cols = SWEEP_COLUMNS_ONESHOT if setting.is_oneshot else SWEEP_COLUMNS_COMIC
    lines = [",".join(cols)]
    for row in rows:
        d = row.to_dict(setting)
        lines.append(",".join(fmt(d[c]) for c in cols))
    return "\n".join(lines) + "\n"


# -- randomized probes ----------------------------------------------------------


def random_dag(rng: random.Random, n: int, edge_p: float = 0.5) -> DirectedGraph:
    """Uniform topological order; each forward pair is an edge with prob ``edge_p``.

    Edge probabilities are drawn from {0.5, 1.0}.
    """
    order = list(range(n))
    rng.shuffle(order)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_p:
                edges.append((order[i], order[j], rng.choice((0.5, 1.0))))
    g = DirectedGraph(n, tuple(edges))
    return fix_tiebreak(g, rng.getrandbits(32))


@dataclass
class ProbeInstance:
    graph: DirectedGraph
    seeds: SeedAssignment
    u: int
    v: int
    target: int
    pair: MarginalPair

    def to_dict(self) -> dict:
        return {
            "graph": serialize_graph(self.graph),
            "in_order": [list(o) for o in self.graph.in_order],
            "seeds": [sorted(s) for s in self.seeds.sets],
            "u": self.u,
            "v": self.v,
            "target": self.target,
            "m1": self.pair.m1,
            "m2": self.pair.m2,
            "gap": self.pair.gap,
        }


@dataclass
class ProbeReport:
    setting: Setting
    params: tuple[float, ...]
    trials: int
    base_seed: int
    violations: list[ProbeInstance]
    max_gap: float

    def to_dict(self) -> dict:
        return {
            "setting": self.setting.value,
            "params": list(self.params),
            "trials": self.trials,
            "base_seed": self.base_seed,
            "violation_count": len(self.violations),
            "max_gap": self.max_gap,
            "violations": [v.to_dict() for v in self.violations],
        }


def _random_subset(rng: random.Random, pool: Iterable[int], p: float) -> set[int]:
    return {x for x in pool if rng.random() < p}


def probe_instance(setting: Setting, params, rng: random.Random, max_nodes: int):
    """Draw one random probe: graph, seeds, the pair (u, v) and a target."""
    n = rng.randint(3, max_nodes)
    g = random_dag(rng, n)
    nodes = list(range(n))
    if setting.is_oneshot:
        m = len(params)
        owner = {}
        for x in nodes:
            if rng.random() < 0.35:
                owner[x] = rng.randrange(m)
        free = [x for x in nodes if x not in owner]
        if len(free) < 2:
            owner = {x: i for x, i in owner.items() if x not in nodes[:2]}
            free = [x for x in nodes if x not in owner]
        u, v = rng.sample(free, 2)
        sets = [{x for x, i in owner.items() if i == idea} for idea in range(m)]
        return g, SeedAssignment(*sets), u, v, rng.randrange(n), 0, 0
    augment = 1 if setting.cross else 0
    own = _random_subset(rng, nodes, 0.25)
    free = [x for x in nodes if x not in own]
    if len(free) < 2:
        own = set()
        free = nodes
    u, v = rng.sample(free, 2)
    other = _random_subset(rng, nodes, 0.3)
    sets = [own, other] if augment == 0 else [other, own]
    return g, SeedAssignment(*sets), u, v, rng.randrange(n), augment, 0


def probe_positive(setting, params, trials: int = 1000, max_nodes: int = 7, base_seed: int = 0,
                   budget: int | None = None, tol: float = VIOLATION_TOL) -> ProbeReport:
    """Search random small instances for a submodularity violation.

    Only meaningful where the characterisation predicts submodularity; a
    clean report is evidence, not proof.
    """
    setting = Setting(setting)
    if max_nodes > 7 or max_nodes < 3:
        raise ConfigError("max_nodes must lie in 3..7")
    predicted, _ = predict_submodular(setting, params)
    if not predicted:
        raise ConfigError(f"{setting.value} at {tuple(params)} is predicted non-submodular")
    model = model_for(setting, params)
    rng = random.Random(base_seed)
    violations = []
    max_gap = -math.inf
    for _ in range(trials):
        g, seeds, u, v, t, augment, measure = probe_instance(setting, tuple(params), rng, max_nodes)
        cex = Counterexample("probe", g, seeds, u, v, t, augment, measure)
        pair = _fixed_order_pair(cex, model, budget)
        max_gap = max(max_gap, pair.gap)
        if pair.gap > tol:
            violations.append(ProbeInstance(g, seeds, u, v, t, pair))
    return ProbeReport(setting, tuple(float(x) for x in params), trials, base_seed, violations, max_gap)


def _fixed_order_pair(cex: Counterexample, model, budget) -> MarginalPair:
    # the sampled tie-break order is part of the probed world; no averaging
    def sig(seeds):
        if isinstance(model, OneShotParams):
            return exact_sigma_oneshot(cex.graph, seeds, model, budget).at(cex.target, cex.measure)
        return exact_sigma_comic(cex.graph, seeds, model, budget).at(cex.target, cex.measure)

    i = cex.augment
    s = cex.seeds
    base = sig(s)
    return MarginalPair(sig(s.with_added(i, cex.u)) - base,
                        sig(s.with_added(i, cex.u, cex.v)) - sig(s.with_added(i, cex.v)))


POSITIVE_CASES: list[tuple[Setting, tuple[float, ...], str]] = [
    (Setting.COMPETING_SELF, (1.0, 0.6, 0.35, 0.3), "q_a0 = 1"),
    (Setting.COMPETING_SELF, (0.7, 0.6, 0.7, 0.3), "q_a0 = q_ab"),
    (Setting.COMPETING_SELF, (0.7, 0.6, 0.3, 0.6), "q_b0 = q_ba"),
    (Setting.COMPLEMENTARY_SELF_NORECON, (0.0, 0.5, 0.7, 0.8), "q_a0 = 0"),
    (Setting.COMPLEMENTARY_SELF_NORECON, (0.3, 0.0, 0.7, 0.8), "q_b0 = 0"),
    (Setting.COMPLEMENTARY_SELF_NORECON, (0.4, 0.3, 0.4, 0.8), "q_a0 = q_ab"),
    (Setting.COMPLEMENTARY_SELF_NORECON, (0.3, 0.5, 0.7, 0.5), "q_b0 = q_ba"),
    (Setting.COMPLEMENTARY_SELF_RECON, (0.4, 0.3, 0.4, 0.8), "q_a0 = q_ab"),
    (Setting.COMPLEMENTARY_SELF_RECON, (0.3, 0.5, 0.7, 0.5), "q_b0 = q_ba"),
    (Setting.COMPLEMENTARY_SELF_RECON, (0.3, 0.0, 0.7, 0.8), "q_b0 = 0"),
    (Setting.COMPLEMENTARY_CROSS_NORECON, (0.4, 0.3, 0.4, 0.8), "q_a0 = q_ab"),
    (Setting.COMPLEMENTARY_CROSS_NORECON, (0.3, 1.0, 0.7, 1.0), "q_b0 = 1"),
    (Setting.COMPLEMENTARY_CROSS_RECON, (0.4, 0.3, 0.4, 0.8), "q_a0 = q_ab"),
    (Setting.COMPLEMENTARY_CROSS_RECON, (0.3, 1.0, 0.7, 1.0), "q_b0 = 1"),
    (Setting.ONESHOT, (0.7, 0.7), "q_i >= q_j for all j"),
    (Setting.ONESHOT, (0.8, 0.5, 0.3), "q_i >= q_j for all j"),
    (Setting.ONESHOT, (0.0, 0.6), "q_i = 0"),
]
