"""Experiment runner: seeded run matrices, trace files, aggregation, sweeps.

A run matrix is (algorithm config) x (seed) on one instance under one
evaluation budget. Every run gets its own objective (fresh counters, hard
budget cap) and its own rng stream derived from (master_seed, seed), so runs
are order-insensitive and reruns are byte-identical up to wall clock.
"""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import baselines
from .baselines import BaselineParams
from .inner_solver import NMConfig
from .solar import SolarConfig, solar_run
from .subspace import SamplingVariant
from .testbed import ProblemInstance, instance_from_spec
from .trace import Trace, config_hash

ALGORITHM_NAMES = ("solar", "zo-gd", "zo-gd-ls", "mtp", "cg", "sa", "msbh")


class ConfigError(ValueError):
    """Malformed experiment configuration (CLI exit code 2)."""


# ---------------------------------------------------------------------------
# experiment configuration


_TOP_KEYS = {"instance", "algorithms", "seeds", "budget", "output_dir", "stride", "master_seed"}

_ALGO_KEYS = {
    "solar": {
        "name", "label", "variant", "b", "p", "K", "N", "cone_angle",
        "beta_mode", "beta_growth", "nm_iterations", "nm_step", "elitist_reinsert",
    },
    "zo-gd": {"name", "label", "step_size", "smoothing"},
    "zo-gd-ls": {"name", "label", "step_size", "smoothing", "gs_iters"},
    "mtp": {"name", "label", "step_size", "momentum"},
    "cg": {
        "name", "label", "formula", "restarts", "c1", "max_backtracks",
        "shrink", "exact_quadratic_ls",
    },
    "sa": {"name", "label", "initial_temp", "cooling", "jump_length"},
    "msbh": {"name", "label", "jump_length", "local_iters", "nm_step"},
}


@dataclass
class ExperimentConfig:
    instance: object  # catalogue name or inline instance spec dict
    algorithms: list[dict]
    seeds: list[int]
    budget: int
    output_dir: Optional[str] = None
    stride: int = 1
    master_seed: int = 0

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(doc) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key in ("instance", "algorithms", "seeds", "budget"):
            if key not in doc:
                raise ConfigError(f"missing config key {key!r}")
        seeds = list(doc["seeds"])
        if not seeds:
            raise ConfigError("at least one seed is required")
        budget = int(doc["budget"])
        if budget < 1:
            raise ConfigError("budget must be a positive evaluation count")
        algorithms = [dict(a) for a in doc["algorithms"]]
        if not algorithms:
            raise ConfigError("at least one algorithm config is required")
        for algo in algorithms:
            _validate_algo_config(algo)
        cfg = cls(
            instance=doc["instance"],
            algorithms=algorithms,
            seeds=[int(s) for s in seeds],
            budget=budget,
            output_dir=doc.get("output_dir"),
            stride=int(doc.get("stride", 1)),
            master_seed=int(doc.get("master_seed", 0)),
        )
        if cfg.stride < 1:
            raise ConfigError("stride must be >= 1")
        labels = [algo_label(a) for a in cfg.algorithms]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"algorithm labels must be unique, got {labels}")
        return cfg

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(doc)


def _validate_algo_config(algo: dict) -> None:
    name = algo.get("name")
    if name not in _ALGO_KEYS:
        raise ConfigError(f"unknown algorithm {name!r}; known: {sorted(_ALGO_KEYS)}")
    unknown = set(algo) - _ALGO_KEYS[name]
    if unknown:
        raise ConfigError(f"unknown keys for algorithm {name!r}: {sorted(unknown)}")
    if name == "solar" and "b" not in algo:
        raise ConfigError("solar config requires the base dimension 'b'")


def algo_label(algo: dict) -> str:
    """File-name label; defaults distinguish variants of the same family."""
    if "label" in algo:
        return str(algo["label"])
    name = algo["name"]
    if name == "solar":
        return f"solar-{algo.get('variant', 'vanilla')}"
    if name == "cg":
        formula = algo.get("formula", "prp")
        return f"cg-{formula}" + ("-restart" if algo.get("restarts", False) else "")
    return name


# ---------------------------------------------------------------------------
# single runs


def run_stream(master_seed: int, seed: int) -> np.random.Generator:
    """The documented per-run stream derivation: stream_i = hash(master, seed_i)."""
    return np.random.default_rng([int(master_seed), int(seed)])


def _solar_config(algo: dict, n: int, budget: int) -> SolarConfig:
    total_inner = int(algo.get("N", budget))
    outer = int(algo.get("K", 100))
    outer = max(1, min(outer, total_inner))
    nm = NMConfig(
        max_iterations=int(algo.get("nm_iterations", 10)),
        initial_step=algo.get("nm_step"),
    )
    return SolarConfig(
        outer_iters=outer,
        total_inner=total_inner,
        base_dim=int(algo["b"]),
        probes=int(algo.get("p", 2)),
        variant=SamplingVariant(algo.get("variant", "vanilla")),
        cone_angle=float(algo.get("cone_angle", np.pi / 8)),
        beta_mode=algo.get("beta_mode", "constant"),
        beta_growth=float(algo.get("beta_growth", 1.0)),
        nm=nm,
        elitist_reinsert=bool(algo.get("elitist_reinsert", False)),
    )


def _baseline_params(algo: dict, budget: int) -> BaselineParams:
    name = algo["name"]
    params = BaselineParams(algorithm=name, budget=budget)
    if "step_size" in algo:
        params.step_size = float(algo["step_size"])
    if "smoothing" in algo:
        params.smoothing = float(algo["smoothing"])
    if name == "zo-gd-ls" and "gs_iters" in algo:
        params.gs_iters = int(algo["gs_iters"])
    if name == "mtp" and "momentum" in algo:
        params.momentum = float(algo["momentum"])
    if name == "cg":
        params.cg_formula = algo.get("formula", "prp")
        params.restarts = bool(algo.get("restarts", False))
        if "c1" in algo:
            params.cg_c1 = float(algo["c1"])
        if "max_backtracks" in algo:
            params.ls_max_backtracks = int(algo["max_backtracks"])
        if "shrink" in algo:
            params.ls_shrink = float(algo["shrink"])
        params.exact_quadratic_ls = bool(algo.get("exact_quadratic_ls", False))
    if name == "sa":
        if "initial_temp" in algo:
            params.sa_initial_temp = float(algo["initial_temp"])
        if "cooling" in algo:
            params.sa_cooling = float(algo["cooling"])
    if name in ("sa", "msbh") and "jump_length" in algo:
        params.jump_length = float(algo["jump_length"])
    if name == "msbh":
        if "local_iters" in algo:
            params.msbh_local_iters = int(algo["local_iters"])
        if "nm_step" in algo:
            params.msbh_nm_step = float(algo["nm_step"])
    return params


_BASELINE_FNS = {
    "zo-gd": baselines.zo_gd,
    "zo-gd-ls": baselines.zo_gd_linesearch,
    "mtp": baselines.momentum_three_point,
    "cg": baselines.cg,
    "sa": baselines.simulated_annealing,
    "msbh": baselines.msbh,
}


def run_single(
    instance: ProblemInstance,
    algo: dict,
    seed: int,
    budget: int,
    master_seed: int = 0,
) -> Trace:
    """One seeded run of one algorithm config, hard-capped at ``budget`` evals."""
    _validate_algo_config(algo)
    label = algo_label(algo)
    meta = {
        "algorithm": label,
        "family": algo["name"],
        "instance": instance.name,
        "seed": int(seed),
        "master_seed": int(master_seed),
        "budget": int(budget),
        "config": dict(sorted(algo.items())),
        "f_star": instance.f_star,
    }
    meta["config_hash"] = config_hash(meta["config"])
    rng = run_stream(master_seed, seed)
    obj = instance.make_objective(max_evals=budget)
    if algo["name"] == "solar":
        cfg = _solar_config(algo, instance.dim, budget)
        result = solar_run(obj, instance.box, instance.x0, cfg, rng, trace_meta=meta)
        trace = result.trace
    else:
        params = _baseline_params(algo, budget)
        fn = _BASELINE_FNS[algo["name"]]
        trace = fn(obj, instance.box, instance.x0, params, rng, trace_meta=meta)
    trace.meta["eval_count"] = obj.eval_count
    trace.meta["grad_count"] = obj.grad_count
    return trace


def _run_job(job: dict) -> str:
    """Worker entry: build everything from plain data (picklable)."""
    instance = instance_from_spec(job["instance"])
    trace = run_single(
        instance, job["algo"], job["seed"], job["budget"], job["master_seed"]
    )
    out = Path(job["out_dir"]) / f"{algo_label(job['algo'])}__seed{job['seed']}.csv"
    trace.thinned(job["stride"]).to_csv(out)
    return str(out)


def run_experiment(cfg: ExperimentConfig, out_dir=None, workers: int = 1) -> list[Path]:
    """Execute the full matrix; one trace file (plus metadata sidecar) per run."""
    out = Path(out_dir or cfg.output_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    instance_from_spec(cfg.instance)  # fail fast on bad instance specs
    jobs = [
        {
            "instance": cfg.instance,
            "algo": algo,
            "seed": seed,
            "budget": cfg.budget,
            "master_seed": cfg.master_seed,
            "stride": cfg.stride,
            "out_dir": str(out),
        }
        for algo in cfg.algorithms
        for seed in cfg.seeds
    ]
    if workers <= 1:
        paths = [_run_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            paths = list(pool.map(_run_job, jobs))
    return sorted(Path(p) for p in paths)


# ---------------------------------------------------------------------------
# aggregation


@dataclass
class AlgorithmSummary:
    """Mean curve plus a shadow band on a common evaluations grid."""

    algorithm: str
    instance: str
    mode: str
    grid: np.ndarray
    mean: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    final_per_seed: dict[int, float] = field(default_factory=dict)

    def to_csv(self, path) -> None:
        lines = ["evals,mean,lower,upper"]
        for e, m, lo, hi in zip(self.grid, self.mean, self.lower, self.upper):
            lines.append(f"{int(e)},{float(m)!r},{float(lo)!r},{float(hi)!r}")
        Path(path).write_text("\n".join(lines) + "\n")


def _resample(trace: Trace, grid: np.ndarray) -> np.ndarray:
    """Piecewise-constant best-so-far on the grid; the head is backfilled."""
    evals = np.asarray(trace.evals)
    best = np.asarray(trace.best_f)
    idx = np.searchsorted(evals, grid, side="right") - 1
    idx = np.clip(idx, 0, evals.size - 1)
    return best[idx]


def aggregate(
    traces: Sequence[Trace], mode: str = "stddev", grid_step: Optional[int] = None
) -> dict[str, AlgorithmSummary]:
    """Summaries per algorithm over seeds, on one shared evaluations grid.

    "stddev" shades mean +/- one standard deviation; "minmax" shades between
    the full curves of the seeds with the best and worst *final* value.
    """
    if not traces:
        raise ValueError("no traces to aggregate")
    if mode not in ("stddev", "minmax"):
        raise ValueError(f"unknown aggregation mode {mode!r}")
    instances = {t.meta.get("instance", "?") for t in traces}
    if len(instances) != 1:
        raise ValueError(f"traces mix instances: {sorted(instances)}")
    instance = instances.pop()

    groups: dict[str, list[Trace]] = {}
    for t in traces:
        groups.setdefault(t.meta.get("algorithm", "?"), []).append(t)
    for group in groups.values():
        group.sort(key=lambda t: t.meta.get("seed", 0))

    max_final = max(t.final_evals for t in traces)
    step = grid_step if grid_step is not None else max(1, max_final // 1000)
    grid = np.arange(step, max_final + 1, step, dtype=np.int64)
    if grid.size == 0 or grid[-1] != max_final:
        grid = np.append(grid, max_final)

    summaries = {}
    for name, group in sorted(groups.items()):
        curves = np.vstack([_resample(t, grid) for t in group])
        mean = curves.mean(axis=0)
        if mode == "stddev":
            sd = curves.std(axis=0)
            lower, upper = mean - sd, mean + sd
        else:
            finals = np.array([t.final_best for t in group])
            lower = curves[int(np.argmin(finals))]
            upper = curves[int(np.argmax(finals))]
        summaries[name] = AlgorithmSummary(
            algorithm=name,
            instance=instance,
            mode=mode,
            grid=grid,
            mean=mean,
            lower=lower,
            upper=upper,
            final_per_seed={
                int(t.meta.get("seed", i)): t.final_best for i, t in enumerate(group)
            },
        )
    return summaries


def load_traces(directory) -> list[Trace]:
    directory = Path(directory)
    paths = sorted(p for p in directory.glob("*.csv") if not p.name.startswith("summary"))
    traces = [Trace.from_csv(p) for p in paths]
    if not traces:
        raise ValueError(f"no trace files in {directory}")
    return traces


def write_summaries(summaries: dict[str, AlgorithmSummary], out_dir) -> Path:
    """summary__<algorithm>.csv per group plus a summary.json index."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    index = {"instance": "", "mode": "", "algorithms": {}}
    for name, summary in sorted(summaries.items()):
        fname = f"summary__{name}.csv"
        summary.to_csv(out_dir / fname)
        index["instance"] = summary.instance
        index["mode"] = summary.mode
        index["algorithms"][name] = {
            "file": fname,
            "final_per_seed": summary.final_per_seed,
            "final_mean": float(np.mean(list(summary.final_per_seed.values()))),
        }
    index_path = out_dir / "summary.json"
    index_path.write_text(json.dumps(index, indent=2, sort_keys=True) + "\n")
    return index_path


# ---------------------------------------------------------------------------
# parameter sweeps and rate fits


@dataclass
class SweepRow:
    b: int
    b_over_n: float
    subopt_min: float
    subopt_mean: float
    subopt_max: float
    relative: bool


def sweep_b(
    instance: ProblemInstance,
    template: dict,
    b_values: Sequence[float],
    inner_budget: int,
    seeds: Sequence[int] = (0, 1, 2),
    master_seed: int = 0,
) -> list[SweepRow]:
    """Final suboptimality of the subspace method vs base dimension.

    The budget is counted in inner iterations (not evaluations) so each cell
    does the same amount of hypothesis testing regardless of b. Values in
    ``b_values`` below 1 are read as fractions of the instance dimension.
    Suboptimality is relative, (f - f*) / (f(x0) - f*), when the optimum is
    known, absolute otherwise.
    """
    n = instance.dim
    rows = []
    for raw in b_values:
        b = int(round(raw * n)) if 0 < raw < 1 else int(raw)
        b = max(1, b)
        if b >= n:
            warnings.warn(f"skipping b={b}: must be below instance dimension {n}")
            continue
        finals = []
        for seed in seeds:
            algo = dict(template, name="solar", b=b, N=int(inner_budget))
            _validate_algo_config(algo)
            cfg = _solar_config(algo, n, budget=int(inner_budget))
            obj = instance.make_objective()  # unlimited evals; N is the budget
            result = solar_run(obj, instance.box, instance.x0, cfg, run_stream(master_seed, seed))
            f0 = result.trace.best_f[0]
            if instance.f_star is not None and f0 > instance.f_star:
                finals.append((result.f_best - instance.f_star) / (f0 - instance.f_star))
            else:
                finals.append(result.f_best)
        rows.append(
            SweepRow(
                b=b,
                b_over_n=b / n,
                subopt_min=float(min(finals)),
                subopt_mean=float(np.mean(finals)),
                subopt_max=float(max(finals)),
                relative=instance.f_star is not None,
            )
        )
    return rows


def sweep_rows_to_csv(rows: Sequence[SweepRow], path) -> None:
    lines = ["b,b_over_n,subopt_min,subopt_mean,subopt_max,relative"]
    for r in rows:
        lines.append(
            f"{r.b},{r.b_over_n!r},{r.subopt_min!r},{r.subopt_mean!r},{r.subopt_max!r},{int(r.relative)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


@dataclass
class RateFit:
    """Least-squares decay order of log(best_f - f*) vs inner iteration."""

    alpha: float
    r_squared: float
    n_points: int
    window: tuple[int, int]


def fit_linear_rate(trace: Trace, window: tuple[int, int], f_star: float) -> RateFit:
    """Fit log(best_f - f_star) ~ a - alpha * iter over iterations [lo, hi)."""
    lo, hi = window
    sel = [k for k, it in enumerate(trace.iters) if lo <= it < hi]
    if len(sel) < 2:
        raise ValueError(f"window [{lo}, {hi}) selects fewer than two trace records")
    gaps = np.array([trace.best_f[k] for k in sel]) - f_star
    if np.any(gaps <= 1e-15):
        raise ValueError("best_f must stay above f_star + 1e-15 over the window")
    x = np.array([trace.iters[k] for k in sel], dtype=float)
    y = np.log(gaps)
    if np.all(y == y[0]):  # constant window: exactly zero decay
        return RateFit(alpha=0.0, r_squared=1.0, n_points=len(sel), window=(lo, hi))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RateFit(alpha=-float(slope), r_squared=r2, n_points=len(sel), window=(lo, hi))
