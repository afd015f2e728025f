"""Command-line interface: ``comic simulate|exact|check|sweep|probe|greedy``."""

from __future__ import annotations

import argparse
import json
import math
import secrets
import sys
import time
from typing import Sequence

from comic import kernels
from comic.comic import ComicConfig, ConfigError, GapParams, Mode, SeedAssignment
from comic.exact import exact_sigma_comic, exact_sigma_oneshot, threshold_enum_sigma
from comic.graph import GraphError, load_graph
from comic.montecarlo import exact_objective, greedy_select, run_monte_carlo
from comic.oneshot import OneShotParams
from comic import submod

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DISAGREE = 3


class UsageError(Exception):
    pass


def round12(obj):
    """Round every float in a JSON-like structure to 12 significant digits."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round12(v) for v in obj]
    if hasattr(obj, "item"):
        return round12(obj.item())
    return obj


def parse_list(text: str | None, kind=int) -> list:
    if text is None or text.strip() == "":
        return []
    try:
        return [kind(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise UsageError(f"bad list {text!r}: {exc}") from None


# -- argument groups ------------------------------------------------------------


def add_params(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model parameters")
    g.add_argument("--model", choices=["comic", "oneshot"], default="comic")
    g.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.COMPETING.value)
    g.add_argument("--recon", action="store_true", help="enable reconsideration (complementary only)")
    for name in ("qa0", "qb0", "qab", "qba"):
        g.add_argument(f"--{name}", type=float)
    g.add_argument("--q", help="One-Shot strengths, comma separated")


def add_seeds(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("seed sets")
    g.add_argument("--seeds-a", help="Com-IC A seeds, comma separated")
    g.add_argument("--seeds-b", help="Com-IC B seeds, comma separated")
    g.add_argument("--seeds-i", action="append", default=[],
                   help="One-Shot seeds of the next idea (repeat once per idea)")


def gap_values(args) -> tuple[float, float, float, float]:
    values = (args.qa0, args.qb0, args.qab, args.qba)
    if any(v is None for v in values):
        raise UsageError("Com-IC needs --qa0 --qb0 --qab --qba")
    return values


def build_model(args):
    if args.model == "oneshot":
        q = parse_list(args.q, float)
        if not q:
            raise UsageError("One-Shot needs --q")
        return OneShotParams(q)
    return ComicConfig(GapParams(*gap_values(args), args.mode), args.recon)


def build_seeds(args, model) -> SeedAssignment:
    if isinstance(model, OneShotParams):
        lists = [parse_list(s) for s in args.seeds_i]
        if len(lists) > model.m:
            raise UsageError(f"{len(lists)} --seeds-i lists for {model.m} ideas")
        lists += [[] for _ in range(model.m - len(lists))]
        return SeedAssignment(*lists)
    return SeedAssignment(parse_list(args.seeds_a), parse_list(args.seeds_b))


def model_dict(model) -> dict:
    if isinstance(model, OneShotParams):
        return {"model": "oneshot", "q": list(model.q)}
    d = {"model": "comic", "mode": model.gap.mode.value, "recon": model.reconsideration}
    d.update(zip(("q_a0", "q_b0", "q_ab", "q_ba"), model.gap.as_tuple()))
    if model.rho is not None:
        d.update(rho_a=model.rho.rho_a, rho_b=model.rho.rho_b)
    return d


def resolve_seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(32)
    if args.seed < 0:
        raise UsageError("--seed must be nonnegative")
    return args.seed


# -- subcommands ----------------------------------------------------------------


def cmd_simulate(args):
    graph = load_graph(args.graph)
    model = build_model(args)
    seeds = build_seeds(args, model)
    seed = resolve_seed(args)
    res = run_monte_carlo(graph, seeds, model, args.runs, seed, workers=args.parallel)
    payload = {"sigma": [e.to_dict() for e in res.sigma]}
    if args.target is not None:
        payload["target"] = {"node": args.target,
                             "estimates": [res.node_estimate(args.target, i).to_dict() for i in range(len(res.sigma))]}
    params = {**model_dict(model), "graph": args.graph, "seeds": [sorted(s) for s in seeds.sets],
              "runs": args.runs, "seed": seed, "parallel": args.parallel}
    return params, payload, seed, EXIT_OK


def cmd_exact(args):
    graph = load_graph(args.graph)
    model = build_model(args)
    seeds = build_seeds(args, model)
    if args.oracle == "threshold":
        if isinstance(model, OneShotParams):
            raise UsageError("the threshold oracle covers Com-IC only")
        if args.average_ties:
            raise UsageError("--average-ties needs the tree oracle")
        res = threshold_enum_sigma(graph, seeds, model, args.budget)
    elif isinstance(model, OneShotParams):
        res = exact_sigma_oneshot(graph, seeds, model, args.budget, args.average_ties)
    else:
        res = exact_sigma_comic(graph, seeds, model, args.budget, args.average_ties)
    params = {**model_dict(model), "graph": args.graph, "seeds": [sorted(s) for s in seeds.sets],
              "oracle": args.oracle, "average_ties": args.average_ties}
    return params, res.to_dict(), None, EXIT_OK


def check_one(fig: str, params, k: int | None, setting, budget) -> dict:
    cex = submod.build_counterexample(fig, k)
    setting = submod._setting_for(cex, params, setting)
    closed = submod.closed_form_margins(fig, params, k)
    measured = submod.measure_violation(cex, params, setting, budget)
    formula = submod.gap_formula(fig, params, k)
    agree = (
        abs(measured.m1 - closed.m1) <= submod.AGREEMENT_TOL
        and abs(measured.m2 - closed.m2) <= submod.AGREEMENT_TOL
        and abs(measured.gap - formula) <= submod.AGREEMENT_TOL
    )
    predicted, held = submod.predict_submodular(setting, params)
    out = {
        "fig": fig,
        "setting": setting.value,
        "params": list(params),
        "closed_form": closed.to_dict(),
        "measured": measured.to_dict(),
        "formula_gap": formula,
        "agree": agree,
        "predicted_submodular": predicted,
        "conditions": held,
    }
    if k is not None:
        out["k"] = k
    return out


def default_suite() -> list[tuple[str, tuple, int | None, submod.Setting]]:
    S = submod.Setting
    cases = []
    for setting in (S.COMPETING_SELF, S.COMPLEMENTARY_SELF_NORECON, S.COMPLEMENTARY_SELF_RECON,
                    S.COMPLEMENTARY_CROSS_NORECON, S.COMPLEMENTARY_CROSS_RECON):
        for p in submod.sweep_points(setting, 0.25):
            cases.append((setting.figure, p, None, setting))
    for p in submod.sweep_points(S.ONESHOT, 0.25):
        cases.append(("fig4", p, submod.oneshot_k(*p), S.ONESHOT))
    return cases


def cmd_check(args):
    if args.suite:
        rows = [check_one(f, p, k, s, args.budget) for f, p, k, s in default_suite()]
        bad = [r for r in rows if not r["agree"]]
        payload = {"suite": True, "cases": len(rows), "disagreements": bad, "agree": not bad}
        return {"suite": True}, payload, None, EXIT_DISAGREE if bad else EXIT_OK
    if args.fig is None:
        raise UsageError("check needs --fig or --suite")
    k = None
    if args.fig == "fig4":
        if args.qi is None or args.qj is None:
            raise UsageError("fig4 needs --qi and --qj")
        params = (args.qi, args.qj)
        if args.auto_k:
            k = submod.choose_k(args.qi, args.qj)
        elif args.k is not None:
            k = args.k
        else:
            raise UsageError("fig4 needs --k K or --auto-k")
        setting = submod.Setting.ONESHOT
    else:
        if args.k is not None or args.auto_k:
            raise UsageError(f"{args.fig} takes no path parameter")
        params = gap_values(args)
        setting = _check_setting(args)
    out = check_one(args.fig, params, k, setting, args.budget)
    resolved = {"fig": args.fig, "setting": out["setting"], "params": list(params), "k": k}
    return resolved, out, None, EXIT_OK if out["agree"] else EXIT_DISAGREE


def _check_setting(args) -> submod.Setting:
    S = submod.Setting
    if args.fig == "fig1":
        if args.recon:
            raise UsageError("fig1 is measured without reconsideration")
        return S.COMPETING_SELF if args.mode == "competing" else S.COMPLEMENTARY_SELF_NORECON
    if args.mode != "complementary":
        raise UsageError(f"{args.fig} needs --mode complementary")
    if args.fig == "fig2":
        return S.COMPLEMENTARY_SELF_RECON
    return S.COMPLEMENTARY_CROSS_RECON if args.recon else S.COMPLEMENTARY_CROSS_NORECON


def cmd_sweep(args):
    setting = submod.Setting(args.setting)
    k_policy = "auto" if args.k is None else args.k
    rows = submod.sweep_gap(setting, args.step, k_policy, args.budget, workers=args.parallel)
    resolved = {"setting": setting.value, "step": args.step, "k_policy": k_policy}
    if args.format == "csv":
        return resolved, submod.sweep_csv(setting, rows), None, EXIT_OK
    payload = {
        "setting": setting.value,
        "rows": [r.to_dict(setting) for r in rows],
        "agreement": sum(r.agree for r in rows) / len(rows) if rows else 1.0,
    }
    return resolved, payload, None, EXIT_OK


def cmd_probe(args):
    setting = submod.Setting(args.setting)
    if setting.is_oneshot:
        params = parse_list(args.q, float)
        if not params:
            raise UsageError("the oneshot probe needs --q")
    else:
        params = gap_values(args)
    seed = resolve_seed(args)
    report = submod.probe_positive(setting, params, args.trials, args.max_nodes, seed, args.budget)
    resolved = {"setting": setting.value, "params": list(params), "trials": args.trials,
                "max_nodes": args.max_nodes, "seed": seed}
    return resolved, report.to_dict(), seed, EXIT_OK


def cmd_greedy(args):
    graph = load_graph(args.graph)
    model = build_model(args)
    seeds = build_seeds(args, model)
    seed = resolve_seed(args)
    objective = exact_objective(graph, model, args.idea, args.budget) if args.exact else None
    res = greedy_select(graph, model, seeds, args.k, args.runs, seed, lazy=not args.eager,
                        idea=args.idea, objective=objective, workers=args.parallel)
    resolved = {**model_dict(model), "graph": args.graph, "fixed_seeds": [sorted(s) for s in seeds.sets],
                "k": args.k, "idea": args.idea, "runs": args.runs, "seed": seed,
                "lazy": not args.eager, "objective": "exact" if args.exact else "monte-carlo"}
    return resolved, res.to_dict(), seed, EXIT_OK


# -- parser ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="comic", description="Com-IC and One-Shot cascades: simulation, exact spread, submodularity checks.")
    parser.add_argument("--format", choices=["json", "csv"], default=None)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, graph=True, seed=False, parallel=False):
        if graph:
            p.add_argument("--graph", required=True, help="edge-list file")
        if seed:
            p.add_argument("--seed", type=int, help="RNG base seed (random if omitted, echoed in the report)")
        if parallel:
            p.add_argument("--parallel", type=int, default=1, metavar="N")
        p.add_argument("--budget", type=int, default=None, help="oracle leaf budget (default: COMIC_BUDGET or 10^7)")
        p.add_argument("--format", choices=["json", "csv"], default=argparse.SUPPRESS)

    p = sub.add_parser("simulate", help="Monte Carlo spread estimate")
    common(p, seed=True, parallel=True)
    add_params(p)
    add_seeds(p)
    p.add_argument("--runs", type=int, default=10000)
    p.add_argument("--target", type=int, help="also report the adoption probability of this node")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("exact", help="exact spread on a small instance")
    common(p)
    add_params(p)
    add_seeds(p)
    p.add_argument("--oracle", choices=["tree", "threshold"], default="tree")
    p.add_argument("--average-ties", action="store_true", help="average over every in-edge order")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("check", help="compare closed-form and measured marginals on a counterexample")
    common(p, graph=False)
    add_params(p)
    p.add_argument("--fig", choices=list(submod.FIGURES))
    p.add_argument("--k", type=int)
    p.add_argument("--auto-k", action="store_true")
    p.add_argument("--qi", type=float)
    p.add_argument("--qj", type=float)
    p.add_argument("--suite", action="store_true", help="run every figure over its step-0.25 grid")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="predicted versus measured violation over a grid")
    common(p, graph=False, parallel=True)
    p.add_argument("--setting", required=True, choices=[s.value for s in submod.Setting])
    p.add_argument("--step", type=float, default=0.25)
    p.add_argument("--k", type=int, help="fixed fig4 path parameter (default: choose per point)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("probe", help="search random small instances for violations")
    common(p, graph=False, seed=True)
    add_params(p)
    p.add_argument("--setting", required=True, choices=[s.value for s in submod.Setting])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-nodes", type=int, default=7)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("greedy", help="greedy seed selection")
    common(p, seed=True, parallel=True)
    add_params(p)
    add_seeds(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--idea", type=int, default=0)
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--eager", action="store_true", help="re-evaluate every candidate each round")
    p.add_argument("--exact", action="store_true", help="use the exact oracle as objective")
    p.set_defaults(func=cmd_greedy)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        fmt = args.format or ("csv" if args.command == "sweep" else "json")
        args.format = fmt
        if fmt == "csv" and args.command != "sweep":
            raise UsageError("--format csv is available for sweep only")
        if getattr(args, "parallel", 1) < 1:
            raise UsageError("--parallel must be at least 1")
        start = time.perf_counter()
        params, payload, seed, code = args.func(args)
        wall = time.perf_counter() - start
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"comic: usage error: {exc}", file=err)
        return EXIT_USAGE
    except (ConfigError, GraphError, kernels.BudgetExceeded, OSError) as exc:
        print(f"comic: {exc}", file=err)
        return EXIT_FAIL

    if isinstance(payload, str):
        out.write(payload)
        return code
    report = {
        "command": args.command,
        "argv": argv,
        "params": params,
        "payload": payload,
        "wall_time": wall,
        "base_seed": seed,
        "backend": kernels.BACKEND,
    }
    json.dump(round12(report), out, indent=2)
    out.write("\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
