"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line; the lines are printed in the
terminal summary (see ``conftest.py``) and when this file is run directly.
"""

import random
import time

import numpy as np
import pytest

from comic.comic import ComicConfig, GapParams, SeedAssignment
from comic.exact import exact_sigma_comic, exact_sigma_oneshot, threshold_enum_sigma
from comic.graph import tiebreak_variants
from comic.montecarlo import estimate_sigma
from comic.oneshot import OneShotParams
from comic.submod import (
    POSITIVE_CASES,
    VIOLATION_TOL,
    Setting,
    build_counterexample,
    choose_k,
    gap_formula,
    measure_violation,
    probe_positive,
    random_dag,
    sweep_gap,
    sweep_points,
)

from conftest import random_graph

TOL = 1e-10
RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, title: str, detail: str) -> None:
    RESULTS[n] = f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {title}: {detail}"
    assert ok, RESULTS[n]


def random_points(setting: Setting, count: int, seed: int):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = tuple(rng.random() for _ in range(4))
        if GapParams.is_valid(*p, setting.mode):
            out.append(p)
        else:
            a, b, c, d = p
            if setting.mode.value == "competing":
                out.append((max(a, c), max(b, d), min(a, c), min(b, d)))
            else:
                out.append((min(a, c), min(b, d), max(a, c), max(b, d)))
    return out


def formula_check(fig: str, setting: Setting, points):
    cex = build_counterexample(fig)
    worst = 0.0
    for p in points:
        worst = max(worst, abs(measure_violation(cex, p, setting).gap - gap_formula(fig, p)))
    return worst


def test_1_fig1_competing():
    start = time.perf_counter()
    s = Setting.COMPETING_SELF
    pts = sweep_points(s, 0.25) + random_points(s, 20, 1)
    worst = formula_check("fig1", s, pts)
    wall = time.perf_counter() - start
    record(1, worst <= TOL and wall < 60, "fig1 competing gap formula",
           f"{len(pts)} points, max |measured - formula| = {worst:.3g}, {wall:.2f}s")


def test_2_fig1_complementary():
    s = Setting.COMPLEMENTARY_SELF_NORECON
    pts = sweep_points(s, 0.25) + random_points(s, 20, 2)
    worst = formula_check("fig1", s, pts)
    record(2, worst <= TOL, "fig1 complementary gap formula", f"{len(pts)} points, max error {worst:.3g}")


def test_3_fig2_recon():
    s = Setting.COMPLEMENTARY_SELF_RECON
    pts = sweep_points(s, 0.25) + random_points(s, 20, 3)
    worst = formula_check("fig2", s, pts)
    record(3, worst <= TOL, "fig2 reconsideration gap formula", f"{len(pts)} points, max error {worst:.3g}")


def test_4_fig3():
    cex = build_counterexample("fig3")
    vals = [i / 4 for i in range(5)]
    worst = spread = 0.0
    count = 0
    for a0 in vals:
        for b0 in vals:
            for ab in vals:
                if ab < a0:
                    continue
                gaps = []
                for ba in sorted({b0, (b0 + 1) / 2, 1.0}):
                    p = (a0, b0, ab, ba)
                    for s in (Setting.COMPLEMENTARY_CROSS_NORECON, Setting.COMPLEMENTARY_CROSS_RECON):
                        g = measure_violation(cex, p, s).gap
                        worst = max(worst, abs(g - gap_formula("fig3", p)))
                        gaps.append(g)
                spread = max(spread, max(gaps) - min(gaps))
                count += 1
    remark = measure_violation(cex, (0.2, 0.5, 0.6, 1.0), Setting.COMPLEMENTARY_CROSS_RECON).gap
    ok = worst <= TOL and spread <= TOL and remark > VIOLATION_TOL
    record(4, ok, "fig3 gap formula, recon on/off, q_ba-free",
           f"{count} points, max error {worst:.3g}, on/off/q_ba spread {spread:.3g}, q_ba=1 gap {remark:.6g}")


def test_5_fig4():
    worst = 0.0
    positive = True
    for qi, qj in ((0.5, 0.6), (0.5, 0.9), (0.3, 0.7), (0.8, 0.9)):
        k = choose_k(qi, qj)
        got = measure_violation(build_counterexample("fig4", k), (qi, qj)).gap
        worst = max(worst, abs(got - gap_formula("fig4", (qi, qj), k)))
        positive &= got > 0
    ks = (choose_k(0.5, 0.6), choose_k(0.5, 0.9))
    ok = worst <= TOL and positive and ks == (2, 0)
    record(5, ok, "fig4 gap formula with choose_k", f"max error {worst:.3g}, all positive={positive}, k={ks}")


def test_6_characterization_dichotomy():
    total = agree = 0
    comic_abs_bad = 0
    oneshot_negative = 0
    for s in Setting:
        for row in sweep_gap(s, 0.25):
            total += 1
            agree += row.agree
            if row.predicted and abs(row.gap) > VIOLATION_TOL:
                if s.is_oneshot:
                    oneshot_negative += row.gap < 0
                else:
                    comic_abs_bad += 1
    ok = agree == total and comic_abs_bad == 0
    record(6, ok, "predicted vs measured over six sweeps",
           f"{agree}/{total} agree; Com-IC predicted points with |gap| > 1e-9: {comic_abs_bad}; "
           f"One-Shot predicted points with gap < -1e-9 (strictly submodular margin): {oneshot_negative}")


def test_7_positive_probes():
    start = time.perf_counter()
    failures = []
    for setting, params, cond in POSITIVE_CASES:
        rep = probe_positive(setting, params, trials=1000, max_nodes=7, base_seed=2024)
        if rep.violations:
            failures.append(f"{setting.value} [{cond}] {len(rep.violations)} violations, max gap {rep.max_gap:.3g}")
    wall = time.perf_counter() - start
    detail = f"{len(POSITIVE_CASES)} conditions x 1000 instances, {wall:.1f}s"
    if failures:
        detail += "; violated: " + "; ".join(failures)
    record(7, not failures and wall < 600, "positive-case probes", detail)


def _mc_instances():
    rng = random.Random(8)
    models = [
        ComicConfig.make(0.7, 0.6, 0.3, 0.2, "competing"),
        ComicConfig.make(0.3, 0.4, 0.8, 0.7, "complementary"),
        ComicConfig.make(0.3, 0.4, 0.8, 0.7, "complementary", True),
        OneShotParams([0.6, 0.8]),
    ]
    for i in range(20):
        n = rng.randint(3, 6)
        g = random_graph(rng, n, 0.4, probs=(0.3, 0.6, 1.0))
        model = models[i % 4]
        if isinstance(model, OneShotParams):
            seeds = SeedAssignment({0}, {n - 1})
        else:
            seeds = SeedAssignment({0}, {rng.randrange(n)})
        yield g, seeds, model


def test_8_oracle_agreement():
    rng = random.Random(80)
    worst = 0.0
    for _ in range(200):
        n = rng.randint(1, 5)
        g = random_graph(rng, n, 0.4, probs=(0.3, 0.5, 0.8, 1.0))
        seeds = SeedAssignment({v for v in range(n) if rng.random() < 0.3}, {v for v in range(n) if rng.random() < 0.3})
        v = sorted(rng.random() for _ in range(4))
        cfg = (ComicConfig.make(v[3], v[2], v[1], v[0], "competing") if rng.random() < 0.5
               else ComicConfig.make(v[0], v[1], v[2], v[3], "complementary"))
        a = exact_sigma_comic(g, seeds, cfg).sigma
        b = threshold_enum_sigma(g, seeds, cfg).sigma
        worst = max(worst, abs(a[0] - b[0]), abs(a[1] - b[1]))
    inside = 0
    for i, (g, seeds, model) in enumerate(_mc_instances()):
        if isinstance(model, OneShotParams):
            exact = exact_sigma_oneshot(g, seeds, model).sigma[0]
        else:
            exact = exact_sigma_comic(g, seeds, model).sigma[0]
        est = estimate_sigma(g, seeds, model, runs=200_000, base_seed=1000 + i)
        inside += abs(est.mean - exact) <= 4 * est.stderr
    ok = worst <= TOL and inside >= 19
    record(8, ok, "oracle cross-agreement", f"tree vs threshold max diff {worst:.3g} on 200; MC within 4 stderr {inside}/20")


def test_9_order_independence():
    rng = random.Random(9)
    worst = 0.0
    checked = 0
    for fig in ("fig2", "fig3", "fig1"):
        cex = build_counterexample(fig)
        i = cex.augment
        variants = [cex.seeds, cex.seeds.with_added(i, cex.u), cex.seeds.with_added(i, cex.v),
                    cex.seeds.with_added(i, cex.u, cex.v)]
        for _ in range(5):
            a0, ab = sorted(rng.random() for _ in range(2))
            b0, ba = sorted(rng.random() for _ in range(2))
            cfg = ComicConfig.make(a0, b0, ab, ba, "complementary", True)
            for seeds in variants:
                ref = exact_sigma_comic(cex.graph, seeds, cfg).per_node
                for h in tiebreak_variants(cex.graph):
                    worst = max(worst, float(np.max(np.abs(exact_sigma_comic(h, seeds, cfg).per_node - ref))))
                    checked += 1
    record(9, worst <= TOL, "tie-break invariance under reconsideration",
           f"{checked} (instance, order) pairs on fig2, fig3 and fig1; max diff {worst:.3g}")


def test_10_monotonicity():
    rng = random.Random(10)
    combos = ["competing", "complementary-norecon", "complementary-recon", "oneshot"]
    grid = [0.0, 0.25, 0.5, 0.75, 1.0]
    bad = {c: 0 for c in combos}
    for trial in range(500):
        combo = combos[trial % 4]
        n = rng.randint(2, 6)
        g = random_dag(rng, n) if rng.random() < 0.5 else random_graph(rng, n, 0.4)
        if combo == "oneshot":
            model = OneShotParams([rng.choice(grid), rng.choice(grid)])
            owner = {v: rng.randrange(2) for v in range(n) if rng.random() < 0.3}
            seeds = SeedAssignment(*({v for v, k in owner.items() if k == j} for j in range(2)))
            f = lambda s: exact_sigma_oneshot(g, s, model).sigma[0]  # noqa: E731
            taken = set(owner)
        else:
            mode = "competing" if combo == "competing" else "complementary"
            while True:
                p = tuple(rng.choice(grid) for _ in range(4))
                if GapParams.is_valid(*p, mode):
                    break
            model = ComicConfig.make(*p, mode, combo == "complementary-recon")
            seeds = SeedAssignment({v for v in range(n) if rng.random() < 0.3}, {v for v in range(n) if rng.random() < 0.3})
            f = lambda s: exact_sigma_comic(g, s, model).sigma[0]  # noqa: E731
            taken = set(seeds[0])
        base = f(seeds)
        if any(f(seeds.with_added(0, x)) < base - 1e-12 for x in range(n) if x not in taken):
            bad[combo] += 1
    record(10, not any(bad.values()), "monotonicity of exact sigma_A",
           "500 instances; decreases per combination: " + ", ".join(f"{c}={k}" for c, k in bad.items()))


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
