"""Command line front end.

Subcommands: run (execute a config's run matrix), aggregate (summaries with
shadow bands), sweep-b (base-dimension sweep), fit-rate (log-linear decay
fit), catalogue (print the instance catalogue as JSON).

Exit codes: 0 success, 1 run failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    ConfigError,
    ExperimentConfig,
    aggregate,
    fit_linear_rate,
    load_traces,
    run_experiment,
    sweep_b,
    sweep_rows_to_csv,
    write_summaries,
)
from .testbed import catalogue_by_name, catalogue_json
from .trace import Trace


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solar-bench",
        description="Benchmark harness for subspace-section global optimisation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a seeded run matrix from a JSON config")
    p_run.add_argument("--config", required=True, help="JSON experiment config")
    p_run.add_argument("--out", default=None, help="output directory (overrides config)")
    p_run.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p_run.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")

    p_agg = sub.add_parser("aggregate", help="summarise a directory of trace files")
    p_agg.add_argument("directory", help="directory containing trace CSVs")
    p_agg.add_argument("--mode", choices=("stddev", "minmax"), default="stddev")
    p_agg.add_argument("--grid-step", type=int, default=None, help="evals grid step")

    p_sweep = sub.add_parser("sweep-b", help="final suboptimality vs base dimension")
    p_sweep.add_argument("--instance", required=True)
    p_sweep.add_argument("--b-grid", required=True, help="comma list; values < 1 are fractions of n")
    p_sweep.add_argument("--budget", type=int, required=True, help="inner iterations per cell")
    p_sweep.add_argument("--seeds", default="0,1,2", help="comma list of seeds")
    p_sweep.add_argument("--out", default=".", help="output directory for the table")
    p_sweep.add_argument("--template", default=None, help="JSON file with solar config overrides")

    p_fit = sub.add_parser("fit-rate", help="log-linear convergence order over a window")
    p_fit.add_argument("--trace", required=True, help="trace CSV file")
    p_fit.add_argument("--window", required=True, help="lo:hi inner-iteration window")
    p_fit.add_argument("--fstar", type=float, default=None, help="optimum (default: trace metadata)")

    sub.add_parser("catalogue", help="print the instance catalogue as JSON")
    return parser


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.from_json_file(args.config)
    if args.seed is not None:
        cfg.master_seed = args.seed
    paths = run_experiment(cfg, out_dir=args.out, workers=args.workers)
    for p in paths:
        print(p)
    return 0


def _cmd_aggregate(args) -> int:
    traces = load_traces(args.directory)
    summaries = aggregate(traces, mode=args.mode, grid_step=args.grid_step)
    index = write_summaries(summaries, args.directory)
    print(index)
    return 0


def _cmd_sweep(args) -> int:
    try:
        b_values = [float(v) for v in args.b_grid.split(",") if v.strip() != ""]
        seeds = [int(v) for v in args.seeds.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"malformed list argument: {exc}") from exc
    if not b_values or not seeds:
        raise ConfigError("b-grid and seeds must be non-empty")
    template = {}
    if args.template:
        template = json.loads(Path(args.template).read_text())
    instance = catalogue_by_name(args.instance)
    rows = sweep_b(instance, template, b_values, args.budget, seeds=seeds)
    out = Path(args.out) / f"sweep_b__{instance.name}.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    sweep_rows_to_csv(rows, out)
    kind = "relative" if rows and rows[0].relative else "absolute"
    print(f"# final {kind} suboptimality, {len(seeds)} seeds, {args.budget} inner iterations")
    print("b,b/n,min,mean,max")
    for r in rows:
        print(f"{r.b},{r.b_over_n:.3f},{r.subopt_min:.3e},{r.subopt_mean:.3e},{r.subopt_max:.3e}")
    print(out)
    return 0


def _cmd_fit(args) -> int:
    trace = Trace.from_csv(args.trace)
    try:
        lo, hi = (int(v) for v in args.window.split(":"))
    except ValueError as exc:
        raise ConfigError(f"window must be lo:hi, got {args.window!r}") from exc
    f_star = args.fstar
    if f_star is None:
        f_star = trace.meta.get("f_star")
        if f_star is None:
            raise ConfigError("no --fstar given and trace metadata has no f_star")
    fit = fit_linear_rate(trace, (lo, hi), float(f_star))
    print(f"alpha={fit.alpha!r} r_squared={fit.r_squared!r} n_points={fit.n_points}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "aggregate":
            return _cmd_aggregate(args)
        if args.command == "sweep-b":
            return _cmd_sweep(args)
        if args.command == "fit-rate":
            return _cmd_fit(args)
        if args.command == "catalogue":
            print(catalogue_json())
            return 0
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
