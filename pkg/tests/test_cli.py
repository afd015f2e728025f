import io
import json
from importlib import resources

import jsonschema
import pytest

from comic.cli import run

FIG1 = ["--qa0", "0.5", "--qb0", "0.5", "--qab", "0.25", "--qba", "0.25"]


def schema(name):
    return json.loads(resources.files("comic").joinpath(f"schemas/{name}.json").read_text())


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv, expect=0):
    code, out, err = call(*argv)
    assert code == expect, err
    report = json.loads(out)
    jsonschema.validate(report, schema("report"))
    jsonschema.validate(report["payload"], schema(report["command"]))
    return report


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("# small\n4\n0 1 0.5\n1 2 0.5\n0 3\n", encoding="utf-8")
    return str(path)


def test_check_fig1():
    rep = call_json("check", "--fig", "fig1", "--mode", "competing", *FIG1)
    assert rep["payload"]["measured"]["gap"] == 0.0009765625
    assert rep["payload"]["agree"] is True


def test_check_fig4_auto_k():
    rep = call_json("check", "--fig", "fig4", "--qi", "0.5", "--qj", "0.6", "--auto-k")
    assert rep["payload"]["k"] == 2
    assert rep["payload"]["measured"]["gap"] == pytest.approx(0.00014375, abs=1e-12)


def test_check_fig3_recon():
    rep = call_json("check", "--fig", "fig3", "--mode", "complementary", "--recon",
                    "--qa0", "0.2", "--qb0", "0.5", "--qab", "0.6", "--qba", "1")
    assert rep["payload"]["setting"] == "complementary-cross-recon"
    assert rep["payload"]["measured"]["gap"] == pytest.approx(0.048, abs=1e-12)


def test_check_suite_exits_zero():
    rep = call_json("check", "--suite")
    assert rep["payload"]["agree"] and rep["payload"]["cases"] > 0


def test_check_usage_errors():
    assert call("check")[0] == 2
    assert call("check", "--fig", "fig4", "--qi", "0.5", "--qj", "0.6")[0] == 2
    assert call("check", "--fig", "fig2", "--mode", "competing", *FIG1)[0] == 2
    assert call("check", "--fig", "fig1", "--k", "2", *FIG1)[0] == 2


def test_check_validation_error():
    code, _, err = call("check", "--fig", "fig4", "--qi", "0.6", "--qj", "0.5", "--auto-k")
    assert code == 1 and "choose_k" in err


def test_exact(graph_file):
    rep = call_json("exact", "--graph", graph_file, *FIG1, "--seeds-a", "0")
    # node 3: 0.5; node 1: 0.5 * 0.5; node 2: 0.25 * 0.5 * 0.5
    assert rep["payload"]["sigma"] == [1.8125, 0.0]
    assert rep["base_seed"] is None


def test_exact_threshold_and_empty_seeds(graph_file):
    rep = call_json("exact", "--graph", graph_file, *FIG1, "--seeds-b", "0", "--oracle", "threshold")
    assert rep["payload"]["method"] == "threshold-enum"
    assert rep["payload"]["sigma"][0] == 0.0


def test_exact_oneshot(graph_file):
    rep = call_json("exact", "--graph", graph_file, "--model", "oneshot", "--q", "1,0.5",
                    "--seeds-i", "0", "--seeds-i", "")
    assert rep["payload"]["sigma"] == [2.75, 0.0]


def test_exact_budget(graph_file, monkeypatch):
    assert call("exact", "--graph", graph_file, *FIG1, "--seeds-a", "0", "--budget", "1")[0] == 1
    monkeypatch.setenv("COMIC_BUDGET", "1")
    code, _, err = call("exact", "--graph", graph_file, *FIG1, "--seeds-a", "0")
    assert code == 1 and "budget" in err


def test_exact_errors(graph_file, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n0 1 2.0\n", encoding="utf-8")
    assert call("exact", "--graph", str(bad), *FIG1)[0] == 1
    assert call("exact", "--graph", graph_file, *FIG1, "--seeds-a", "9")[0] == 1
    assert call("exact", "--graph", graph_file, "--qa0", "0.5")[0] == 2
    assert call("exact", "--graph", graph_file, "--qa0", "0.2", "--qb0", "0.5", "--qab", "0.6",
                "--qba", "0.5", "--recon")[0] == 1
    assert call("exact", "--graph", graph_file, "--model", "oneshot", "--q", "0.5",
                "--seeds-i", "0", "--seeds-i", "1")[0] == 2
    assert call("exact", "--graph", graph_file, *FIG1, "--seeds-a", "x")[0] == 2


def test_simulate(graph_file):
    argv = ["simulate", "--graph", graph_file, *FIG1, "--seeds-a", "0", "--runs", "20000", "--seed", "5"]
    rep = call_json(*argv)
    est = rep["payload"]["sigma"][0]
    assert abs(est["mean"] - 1.8125) <= 4 * est["stderr"]
    assert rep["base_seed"] == 5
    again = call_json(*argv, "--parallel", "3")
    assert again["payload"] == rep["payload"]


def test_simulate_target_and_auto_seed(graph_file):
    rep = call_json("simulate", "--graph", graph_file, *FIG1, "--seeds-a", "0", "--runs", "100", "--target", "3")
    assert isinstance(rep["base_seed"], int) and rep["params"]["seed"] == rep["base_seed"]
    est = rep["payload"]["target"]["estimates"][0]
    assert abs(est["mean"] - 0.5) <= 4 * est["stderr"]


def test_sweep_csv_default():
    code, out, _ = call("sweep", "--setting", "complementary-cross-recon", "--step", "0.5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "q_a0,q_b0,q_ab,q_ba,predicted,m1,m2,gap,agree"
    assert all(line.endswith("true") for line in lines[1:])


def test_sweep_json():
    rep = call_json("--format", "json", "sweep", "--setting", "oneshot", "--step", "0.5")
    assert rep["payload"]["agreement"] == 1.0
    rep2 = call_json("sweep", "--setting", "oneshot", "--step", "0.5", "--format", "json", "--parallel", "2")
    assert rep2["payload"] == rep["payload"]


def test_sweep_bad_step():
    assert call("sweep", "--setting", "oneshot", "--step", "0.3")[0] == 1


def test_probe():
    rep = call_json("probe", "--setting", "competing-self", "--qa0", "1", "--qb0", "0.5",
                    "--qab", "0.5", "--qba", "0.2", "--trials", "50", "--seed", "1")
    assert rep["payload"]["violation_count"] == 0 and rep["base_seed"] == 1
    assert call("probe", "--setting", "competing-self", *FIG1, "--trials", "5")[0] == 1
    rep = call_json("probe", "--setting", "oneshot", "--q", "0.7,0.7", "--trials", "20", "--seed", "2")
    assert rep["payload"]["params"] == [0.7, 0.7]


def test_greedy(graph_file):
    rep = call_json("greedy", "--graph", graph_file, "--qa0", "1", "--qb0", "1", "--qab", "1", "--qba", "1",
                    "--k", "1", "--exact", "--seed", "0")
    assert rep["payload"]["seeds"] == [0]
    assert rep["payload"]["marginals"] == [2.75]
    rep = call_json("greedy", "--graph", graph_file, "--model", "oneshot", "--q", "1", "--k", "2",
                    "--runs", "200", "--seed", "3", "--eager")
    assert len(rep["payload"]["seeds"]) == 2


def test_greedy_k_too_large(graph_file):
    assert call("greedy", "--graph", graph_file, *FIG1, "--k", "9", "--seed", "0")[0] == 1


def test_usage():
    assert call()[0] == 2
    assert call("bogus")[0] == 2
    assert call("simulate")[0] == 2
    assert call("exact", "--graph", "x", *FIG1, "--format", "csv")[0] == 2
    assert call("--help")[0] == 0


def test_numbers_twelve_digits(graph_file, tmp_path):
    g = tmp_path / "third.txt"
    g.write_text("2\n0 1 0.3333333333333333\n", encoding="utf-8")
    rep = call_json("exact", "--graph", str(g), "--qa0", "1", "--qb0", "1", "--qab", "1", "--qba", "1", "--seeds-a", "0")
    assert rep["payload"]["sigma"][0] == 1.33333333333
