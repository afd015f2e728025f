import random

import pytest

from comic.comic import ComicConfig, SeedAssignment
from comic.graph import DirectedGraph, fix_tiebreak


def random_graph(rng: random.Random, n: int, edge_p: float = 0.4, probs=(0.5, 1.0), dag: bool = False):
    edges = []
    for s in range(n):
        for d in range(n):
            if s == d or (dag and d < s):
                continue
            if rng.random() < edge_p:
                edges.append((s, d, rng.choice(probs)))
    return fix_tiebreak(DirectedGraph(n, tuple(edges)), rng.getrandbits(32))


def random_seeds(rng: random.Random, n: int, p: float = 0.3) -> SeedAssignment:
    return SeedAssignment({v for v in range(n) if rng.random() < p}, {v for v in range(n) if rng.random() < p})


def random_config(rng: random.Random, recon_ok: bool = True) -> ComicConfig:
    grid = [0.0, 0.25, 0.5, 0.75, 1.0, 0.3, 0.6]
    while True:
        a0, b0, ab, ba = (rng.choice(grid) for _ in range(4))
        mode = rng.choice(["competing", "complementary"])
        recon = recon_ok and mode == "complementary" and rng.random() < 0.5
        try:
            return ComicConfig.make(a0, b0, ab, ba, mode, recon)
        except ValueError:
            continue


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
