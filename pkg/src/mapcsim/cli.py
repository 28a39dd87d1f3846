"""Command-line front end: generate / solve / sweep / check.

Exit codes: 0 success, 1 infeasible or invalid input, 2 problem size
refused by the exact solver's guard rails, 3 I/O failure.
"""

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .baseline import BaselineConfig, CapMode, non_coordinated_allocate
from .core import NetworkParams, check_feasibility, evaluate
from .exact import ExactConfig, SizeLimitError, solve_exact_report
from .experiments import (
    Solver,
    SweepKind,
    SweepSpec,
    emit_csv,
    emit_plot_svg,
    run_sweep,
    sweep_output_paths,
)
from .heuristic import (
    CapacityMetric,
    HeuristicConfig,
    TargetSizePolicy,
    run_heuristic,
)
from .propagation import PlacementConfig, build_gain_matrix, generate_scenario
from .serialize import (
    allocation_to_dict,
    evaluation_to_dict,
    feasibility_to_dict,
    load_allocation,
    load_scenario,
    save_scenario,
    solver_report_to_dict,
)


def _load_config_file(path: str) -> dict:
    """Read a TOML or JSON config file into a plain dict."""
    text = Path(path).read_bytes()
    if path.endswith(".json"):
        return json.loads(text)
    try:
        import tomllib
    except ImportError:
        import tomli as tomllib
    return tomllib.loads(text.decode())


def _params_from(cfg: dict) -> NetworkParams:
    return NetworkParams(**cfg.get("params", {}))


def _placement_from(cfg: dict, seed_flag) -> PlacementConfig:
    kwargs = dict(cfg.get("placement", {}))
    if seed_flag is not None:
        kwargs["seed"] = seed_flag
    return PlacementConfig(**kwargs)


def _cmd_generate(args) -> int:
    cfg = _load_config_file(args.config) if args.config else {}
    params = _params_from(cfg)
    placement = _placement_from(cfg, args.seed)
    scenario = generate_scenario(args.n_aps, args.n_stas, params, placement)
    if args.out:
        save_scenario(scenario, args.out)
    else:
        from .serialize import scenario_to_dict
        json.dump(scenario_to_dict(scenario), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return 0


def _cmd_solve(args) -> int:
    cfg = _load_config_file(args.config) if args.config else {}
    scenario = load_scenario(args.scenario)
    gains = build_gain_matrix(scenario)
    params = scenario.params

    if args.solver == "heuristic":
        hkw = dict(cfg.get("heuristic", {}))
        hkw.setdefault("sinr_threshold_linear", params.sinr_threshold_linear)
        if args.metric is not None:
            hkw["capacity_metric"] = CapacityMetric(args.metric)
        elif "capacity_metric" in hkw:
            hkw["capacity_metric"] = CapacityMetric(hkw["capacity_metric"])
        if "target_size_policy" in hkw:
            hkw["target_size_policy"] = TargetSizePolicy(hkw["target_size_policy"])
        if "power_levels_mw" in hkw:
            hkw["power_levels_mw"] = tuple(hkw["power_levels_mw"])
        alloc = run_heuristic(scenario, gains, HeuristicConfig(**hkw))
        report = {"solver": "heuristic",
                  "allocation": allocation_to_dict(alloc),
                  "evaluation": evaluation_to_dict(evaluate(scenario, gains, alloc))}
    elif args.solver == "exact":
        ekw = dict(cfg.get("exact", {}))
        if "limits" in ekw:
            ekw["limits"] = tuple(ekw["limits"])
        if "power_grid_mw" in ekw:
            ekw["power_grid_mw"] = tuple(ekw["power_grid_mw"])
        report_obj = solve_exact_report(scenario, gains, ExactConfig(**ekw))
        report = {"solver": "exact", **solver_report_to_dict(report_obj)}
        alloc = report_obj.allocation
    else:
        bkw = dict(cfg.get("baseline", {}))
        if args.seed is not None:
            bkw["seed"] = args.seed
        if "cap_mode" in bkw:
            bkw["cap_mode"] = CapMode(bkw["cap_mode"])
        alloc = non_coordinated_allocate(scenario, BaselineConfig(**bkw))
        report = {"solver": "baseline",
                  "allocation": allocation_to_dict(alloc),
                  "evaluation": evaluation_to_dict(evaluate(scenario, gains, alloc))}

    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_check(args) -> int:
    scenario = load_scenario(args.scenario)
    alloc = load_allocation(args.allocation)
    report = check_feasibility(scenario, alloc)
    text = json.dumps(feasibility_to_dict(report), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report.feasible else 1


def _cmd_sweep(args) -> int:
    cfg = _load_config_file(args.config) if args.config else {}
    skw = dict(cfg.get("sweep", {}))
    skw["kind"] = SweepKind(skw.get("kind", "sta_count"))
    skw["points"] = tuple(skw.get("points", (8, 10, 12, 14, 16, 18, 20, 22, 24)))
    if "solvers" in skw:
        skw["solvers"] = tuple(Solver(s) for s in skw["solvers"])
    if "variants" in skw:
        skw["variants"] = tuple((float(p), float(a)) for p, a in skw["variants"])
    skw["base_params"] = _params_from(cfg)
    skw["placement"] = _placement_from(cfg, args.seed)
    if "exact" in cfg:
        ekw = dict(cfg["exact"])
        if "limits" in ekw:
            ekw["limits"] = tuple(ekw["limits"])
        if "power_grid_mw" in ekw:
            ekw["power_grid_mw"] = tuple(ekw["power_grid_mw"])
        skw["exact_config"] = ExactConfig(**ekw)
    if args.out:
        skw["output_dir"] = args.out
    spec = SweepSpec(**skw)

    rows = run_sweep(spec, workers=args.workers)
    csv_path, svg_path = sweep_output_paths(spec)
    Path(spec.output_dir).mkdir(parents=True, exist_ok=True)
    emit_csv(rows, csv_path)
    emit_plot_svg(rows, svg_path)
    sys.stdout.write(f"wrote {csv_path} and {svg_path}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mapcsim",
        description="Multi-AP downlink coordination: scenario generation, "
                    "allocation solvers, feasibility checks, sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="draw a random scenario and emit JSON")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--n-aps", type=int, default=4)
    g.add_argument("--n-stas", type=int, default=16)
    g.add_argument("--config", default=None, help="TOML/JSON with [params]/[placement]")
    g.add_argument("--out", default=None, help="scenario JSON path (default stdout)")
    g.set_defaults(func=_cmd_generate)

    s = sub.add_parser("solve", help="run one solver on a scenario file")
    s.add_argument("scenario", help="scenario JSON path")
    s.add_argument("--solver", choices=("exact", "heuristic", "baseline"),
                   default="heuristic")
    s.add_argument("--metric", choices=("min-sinr", "sum-rate"), default=None,
                   help="heuristic candidate-scoring metric")
    s.add_argument("--seed", type=int, default=None, help="baseline RNG seed")
    s.add_argument("--config", default=None)
    s.add_argument("--out", default=None, help="report JSON path (default stdout)")
    s.set_defaults(func=_cmd_solve)

    c = sub.add_parser("check", help="feasibility report for an allocation file")
    c.add_argument("scenario", help="scenario JSON path")
    c.add_argument("allocation", help="allocation JSON path")
    c.add_argument("--out", default=None)
    c.set_defaults(func=_cmd_check)

    w = sub.add_parser("sweep", help="run a configured sweep, emit CSV + SVG")
    w.add_argument("--config", default=None, help="TOML/JSON sweep description")
    w.add_argument("--seed", type=int, default=None, help="master seed override")
    w.add_argument("--out", default=None, help="output directory")
    w.add_argument("--workers", type=int, default=1)
    w.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SizeLimitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
