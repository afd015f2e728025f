import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from comic import kernels
from comic.comic import (
    ComicConfig,
    ConfigError,
    GapParams,
    Mode,
    RhoParams,
    SeedAssignment,
    State,
    derive_rho,
    simulate_comic,
)
from comic.graph import DirectedGraph, GraphError, parse_graph

from conftest import random_config, random_graph, random_seeds

EDGE, TRIAL_A, TRIAL_B, RECON_A, RECON_B = 0, 1, 2, 3, 4


def test_gap_mode_invariants():
    GapParams(0.5, 0.5, 0.25, 0.25, "competing")
    GapParams(0.2, 0.3, 0.5, 0.6, Mode.COMPLEMENTARY)
    with pytest.raises(ConfigError):
        GapParams(0.2, 0.5, 0.3, 0.1, "competing")
    with pytest.raises(ConfigError):
        GapParams(0.5, 0.5, 0.25, 0.6, "complementary")
    with pytest.raises(ConfigError):
        GapParams(1.2, 0.5, 0.25, 0.25)
    with pytest.raises(ValueError):
        GapParams(0.5, 0.5, 0.5, 0.5, "sideways")


def test_derive_rho_examples():
    assert derive_rho(GapParams(0.4, 0.3, 0.4, 0.5, "complementary")).rho_a == 0.0
    assert derive_rho(GapParams(0.2, 0.3, 0.6, 0.5, "complementary")).rho_a == pytest.approx(0.5, abs=1e-15)
    assert derive_rho(GapParams(1.0, 0.3, 1.0, 0.5, "complementary")).rho_a == 0.0
    with pytest.raises(ConfigError):
        derive_rho(GapParams(0.5, 0.5, 0.25, 0.25, "competing"))


q01 = st.floats(0.0, 1.0, allow_nan=False)


@given(q01, q01, q01, q01)
@settings(max_examples=300, deadline=None)
def test_rho_balances_order(a, b, c, d):
    qa0, qab = sorted((a, c))
    qb0, qba = sorted((b, d))
    gap = GapParams(qa0, qb0, qab, qba, "complementary")
    rho = derive_rho(gap)
    assert 0.0 <= rho.rho_a <= 1.0 and 0.0 <= rho.rho_b <= 1.0
    if qa0 < 1.0:
        lhs = qa0 + (1 - qa0) * qb0 * rho.rho_a
        rhs = (1 - qb0) * qa0 + qb0 * qab
        assert lhs == pytest.approx(rhs, abs=1e-12)
    if qb0 < 1.0:
        lhs = qb0 + (1 - qb0) * qa0 * rho.rho_b
        rhs = (1 - qa0) * qb0 + qa0 * qba
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_config_rules():
    with pytest.raises(ConfigError):
        ComicConfig.make(0.5, 0.5, 0.25, 0.25, "competing", reconsideration=True)
    with pytest.raises(ConfigError):
        ComicConfig(GapParams(0.2, 0.3, 0.5, 0.6, "complementary"), False, RhoParams(0.1, 0.1))
    cfg = ComicConfig.make(0.2, 0.3, 0.6, 0.6, "complementary", True)
    assert cfg.rho.rho_a == pytest.approx(0.5)
    assert ComicConfig.make(0.2, 0.3, 0.6, 0.6, "complementary").rho is None


def test_deterministic_path():
    g = parse_graph("3\n0 1\n1 2\n")
    cfg = ComicConfig.make(1, 1, 1, 1)
    out = simulate_comic(g, SeedAssignment({0}, set()), cfg, seed=1)
    assert [out.node(v).a_state for v in range(3)] == [State.ADOPTED] * 3
    assert [out.node(v).a_time for v in range(3)] == [0, 1, 2]
    assert out.adopters_a == 3 and out.adopters_b == 0
    assert out.node(1).b_state is State.IDLE and out.node(1).b_time is None


def test_a_cannot_spread_alone_when_qa0_zero():
    rng = random.Random(4)
    cfg = ComicConfig.make(0.0, 0.5, 0.7, 0.8, "complementary")
    for trial in range(50):
        g = random_graph(rng, 6, 0.5)
        a = rng.randrange(6)
        out = simulate_comic(g, SeedAssignment({a}, set()), cfg, seed=trial)
        assert set(np.flatnonzero(out.a_state == State.ADOPTED)) == {a}


def test_bad_seeds_rejected():
    g = parse_graph("2\n0 1\n")
    cfg = ComicConfig.make(1, 1, 1, 1)
    with pytest.raises(GraphError):
        simulate_comic(g, SeedAssignment({5}, set()), cfg)
    with pytest.raises(ConfigError):
        simulate_comic(g, SeedAssignment({0}), cfg)


def test_dual_seed_adopts_both():
    g = parse_graph("2\n0 1\n")
    out = simulate_comic(g, SeedAssignment({0}, {0}), ComicConfig.make(0.5, 0.5, 0.0, 0.0), seed=0)
    s = out.node(0)
    assert s.a_state is State.ADOPTED and s.b_state is State.ADOPTED
    assert s.a_time == 0 and s.b_time == 0


def test_dual_seed_sends_a_first():
    # node 1 gets both proposals from dual seed 0 in the same step; A is tried first
    g = parse_graph("2\n0 1\n")
    cfg = ComicConfig.make(0.5, 0.5, 0.25, 0.25)
    out = simulate_comic(g, SeedAssignment({0}, {0}), cfg, seed=3, trace=True)
    trials = [k for k, _, _, _ in out.trace if k in (TRIAL_A, TRIAL_B)]
    assert trials == [TRIAL_A, TRIAL_B]
    assert out.trace[1][2] == (0.25 if out.trace[0][3] else 0.5)


def test_tie_order_controls_first_proposal():
    # a=0 -> 2 and b=1 -> 2 arrive together; in_order decides who goes first
    g = parse_graph("3\n0 2\n1 2\n")
    cfg = ComicConfig.make(0.5, 0.5, 0.25, 0.25)
    for order, first in (((0, 1), TRIAL_A), ((1, 0), TRIAL_B)):
        h = g.with_in_order([(), (), order])
        out = simulate_comic(h, SeedAssignment({0}, {1}), cfg, seed=0, trace=True)
        assert out.trace[0][0] == first


def _check_run(g, seeds, cfg, out):
    recon = cfg.reconsideration
    for v in seeds[0]:
        assert out.node(v).a_state is State.ADOPTED and out.node(v).a_time == 0
    for v in seeds[1]:
        assert out.node(v).b_state is State.ADOPTED and out.node(v).b_time == 0
    if not recon:
        assert not np.any(out.a_state == State.SUSPENDED)
        assert not np.any(out.b_state == State.SUSPENDED)
    for v in range(g.node_count):
        s = out.node(v)
        assert (s.a_time is not None) == (s.a_state is State.ADOPTED)
        assert (s.b_time is not None) == (s.b_state is State.ADOPTED)
    # every non-seed adopter has an in-neighbour that adopted the same idea strictly earlier
    for idea, (state, times) in enumerate(((out.a_state, out.a_time), (out.b_state, out.b_time))):
        for v in np.flatnonzero(state == State.ADOPTED):
            if v in seeds[idea]:
                continue
            preds = [s for s, d, _ in g.edges if d == v and state[s] == State.ADOPTED]
            assert any(times[s] < times[v] for s in preds)
    # coin discipline: one edge coin per edge, one primary and one reconsideration trial per node and idea
    counts = Counter((k, s) for k, s, _, _ in out.trace)
    assert all(c == 1 for c in counts.values())
    if not recon:
        assert not any(k in (RECON_A, RECON_B) for k, _ in counts)


def test_run_invariants_random():
    rng = random.Random(7)
    for trial in range(300):
        n = rng.randint(1, 8)
        g = random_graph(rng, n, 0.35)
        seeds = random_seeds(rng, n)
        cfg = random_config(rng)
        out = simulate_comic(g, seeds, cfg, seed=trial, trace=True)
        _check_run(g, seeds, cfg, out)
        again = simulate_comic(g, seeds, cfg, seed=trial, trace=True)
        for f in ("a_state", "b_state", "a_time", "b_time"):
            assert np.array_equal(getattr(out, f), getattr(again, f))
        assert out.trace == again.trace


def test_competing_exclusive_when_q_cross_zero():
    rng = random.Random(8)
    cfg = ComicConfig.make(0.8, 0.7, 0.0, 0.0, "competing")
    for trial in range(200):
        n = rng.randint(2, 8)
        g = random_graph(rng, n, 0.4)
        seeds = random_seeds(rng, n)
        out = simulate_comic(g, seeds, cfg, seed=trial)
        both = np.flatnonzero((out.a_state == State.ADOPTED) & (out.b_state == State.ADOPTED))
        assert set(both) <= seeds[0] & seeds[1]


def test_suspended_and_reconsideration():
    # a=0 -> x=2 <- b=1 with A first; A fails at q_a0 = 0, B then adopts and triggers rho_a = 1
    g = parse_graph("3\n0 2\n1 2\n")
    cfg = ComicConfig.make(0.0, 1.0, 1.0, 1.0, "complementary", True)
    out = simulate_comic(g, SeedAssignment({0}, {1}), cfg, seed=0, trace=True)
    s = out.node(2)
    assert s.a_state is State.ADOPTED and s.b_state is State.ADOPTED
    assert s.a_time == 1 and s.b_time == 1
    norecon = ComicConfig.make(0.0, 1.0, 1.0, 1.0, "complementary")
    assert simulate_comic(g, SeedAssignment({0}, {1}), norecon).node(2).a_state is State.REJECTED


def test_suspended_state_persists_without_b():
    g = parse_graph("2\n0 1\n")
    cfg = ComicConfig.make(0.0, 0.5, 0.5, 0.5, "complementary", True)
    assert simulate_comic(g, SeedAssignment({0}, set()), cfg).node(1).a_state is State.SUSPENDED


def test_second_proposal_ignored():
    # two A-seeds reach node 2 together; only the first in in_order triggers a trial
    g = parse_graph("3\n0 2\n1 2\n")
    out = simulate_comic(g, SeedAssignment({0, 1}, set()), ComicConfig.make(0.5, 0.5, 0.5, 0.5), seed=2, trace=True)
    assert [k for k, *_ in out.trace] == [TRIAL_A]


def test_edge_coin_shared_by_ideas():
    # a blocked edge blocks both ideas for the whole run
    g = parse_graph("2\n0 1 0.5\n")
    cfg = ComicConfig.make(1, 1, 1, 1)
    for seed in range(40):
        out = simulate_comic(g, SeedAssignment({0}, {0}), cfg, seed=seed, trace=True)
        assert out.node(1).a_state == out.node(1).b_state
        assert sum(1 for k, *_ in out.trace if k == EDGE) == 1


def test_uniform_stream_bound():
    # the worst case is every edge coin plus two primary and two reconsideration trials per node
    rng = random.Random(1)
    for _ in range(50):
        g = random_graph(rng, 7, 0.6, probs=(0.5,))
        cfg = ComicConfig.make(0.5, 0.5, 0.9, 0.9, "complementary", True)
        seeds = random_seeds(rng, 7)
        out = simulate_comic(g, seeds, cfg, seed=1, trace=True)
        assert len(out.trace) <= g.edge_count + 4 * g.node_count


def test_graph_arrays_shared_across_threads():
    from concurrent.futures import ThreadPoolExecutor

    g = random_graph(random.Random(2), 30, 0.2)
    cfg = ComicConfig.make(0.6, 0.6, 0.3, 0.3)
    seeds = SeedAssignment({0, 1}, {2})
    ref = [simulate_comic(g, seeds, cfg, seed=s).adopters_a for s in range(40)]
    with ThreadPoolExecutor(4) as pool:
        got = list(pool.map(lambda s: simulate_comic(g, seeds, cfg, seed=s).adopters_a, range(40)))
    assert got == ref


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
