"""The Solar method: iterated minimisation over random affine sections.

Each inner iteration extracts the best stored points, draws a random
low-dimensional section through the best one, minimises the restriction with
a budgeted Nelder-Mead, and stores the candidate. Because the section always
passes through the incumbent and the inner solver starts there, the record
can only improve.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .best_store import BestStore
from .inner_solver import NMConfig, RestrictedProblem, nelder_mead
from .oracle import BoxSet, BudgetExceededError, Objective, penalised
from .subspace import (
    BaseIndexSet,
    ConeParams,
    RayMap,
    SamplingVariant,
    beta_schedule,
    choose_base,
    dominant_direction,
    ray_eval,
    sample_cone,
    sample_vanilla,
)
from .trace import Trace


@dataclass
class SolarConfig:
    """Driver parameters.

    ``total_inner`` is split evenly over the outer iterations (floor), each of
    which pins one base-index set. The cone angle is only consulted by the
    cone variants; ``beta_mode`` "growing" widens it linearly over the run.
    """

    outer_iters: int  # K
    total_inner: int  # N
    base_dim: int  # b
    probes: int = 1  # p
    variant: SamplingVariant = SamplingVariant.VANILLA
    cone_angle: float = np.pi / 8
    beta_mode: str = "constant"
    beta_growth: float = 1.0
    nm: NMConfig = field(default_factory=NMConfig)
    elitist_reinsert: bool = False

    def validate(self, n: int) -> None:
        if self.outer_iters < 1:
            raise ValueError("outer_iters must be >= 1")
        if self.total_inner < self.outer_iters:
            raise ValueError("total_inner must be >= outer_iters")
        if not 1 <= self.base_dim < n:
            raise ValueError(f"need 1 <= base_dim < n, got {self.base_dim} with n={n}")
        if self.probes < 1:
            raise ValueError("probes must be >= 1")
        if self.variant is not SamplingVariant.VANILLA and not 0 < self.cone_angle < np.pi / 2:
            raise ValueError("cone_angle must lie in (0, pi/2) for cone variants")
        if self.beta_mode not in ("constant", "growing"):
            raise ValueError(f"unknown beta_mode {self.beta_mode!r}")


@dataclass
class SolarResult:
    x_best: np.ndarray
    f_best: float
    trace: Trace
    eval_count: int
    grad_count: int


def _resolve_direction(
    variant: SamplingVariant,
    extracted: list[tuple[float, np.ndarray]],
    obj: Objective,
) -> Optional[np.ndarray]:
    """Dominant direction with cold-start fallbacks.

    Secant with fewer than two stored points degrades to the gradient variant
    when one is available, otherwise to vanilla; a zero direction always
    degrades to vanilla so every iteration stays productive.
    """
    if variant is SamplingVariant.CONE_SECANT and len(extracted) < 2:
        variant = SamplingVariant.CONE_GRADIENT if obj.has_gradient else SamplingVariant.VANILLA
    g = dominant_direction(variant, extracted, obj)
    if g is not None and not np.any(g != 0.0):
        return None
    return g


def _apply_reinsertion(
    store: BestStore,
    extracted: list[tuple[float, np.ndarray]],
    candidate_f: float,
    candidate_x: np.ndarray,
    was_full: bool,
    elitist: bool,
) -> None:
    """Store update after one inner solve.

    As in the pseudocode: insert the candidate, re-insert all extracted
    entries except the worst-extracted one when the store was at capacity.
    With ``elitist`` set, the better of {candidate, dropped entry} survives
    instead of the candidate unconditionally.
    """
    reinserts = extracted[:-1] if was_full else extracted
    entrant_f, entrant_x = candidate_f, candidate_x
    if was_full and elitist and extracted[-1][0] < candidate_f:
        entrant_f, entrant_x = extracted[-1]
    store.insert(entrant_f, entrant_x)
    for value, point in reinserts:
        store.insert(value, point)


def inner_iteration(
    obj: Objective,
    box: BoxSet,
    store: BestStore,
    base: BaseIndexSet,
    cfg: SolarConfig,
    nm_cfg: NMConfig,
    beta: float,
    rng: np.random.Generator,
) -> float:
    """One hypothesis test: draw a section, solve the restriction, update the store.

    Returns the candidate value. If the evaluation budget dies mid-solve, the
    extracted entries are re-inserted before the exception propagates, so the
    store is always consistent.
    """
    extracted = []
    count = min(cfg.probes, len(store))
    for _ in range(count):
        extracted.append(store.extract_min())
    was_full = count == cfg.probes

    try:
        f1, x1 = extracted[0]
        g = _resolve_direction(cfg.variant, extracted, obj)
        if g is None:
            matrix = sample_vanilla(base.n, base, rng)
        else:
            cone = ConeParams(direction=g, half_angle=cfg.cone_angle, beta=beta)
            matrix = sample_cone(base.n, base, cone, rng)
        ray = RayMap(anchor=x1, base=base, matrix=matrix)
        problem = RestrictedProblem(ray=ray, obj=obj, box=box)
        t0 = x1[base.indices]
        t_best, f_best = nelder_mead(problem.value, t0, nm_cfg)
    except BudgetExceededError:
        for value, point in extracted:
            store.insert(value, point)
        raise

    x_cand = ray_eval(ray, t_best)
    _apply_reinsertion(store, extracted, f_best, x_cand, was_full, cfg.elitist_reinsert)
    return f_best


def solar_run(
    obj: Objective,
    box: BoxSet,
    x0,
    cfg: SolarConfig,
    rng: np.random.Generator,
    trace_meta: Optional[dict] = None,
) -> SolarResult:
    """Run the full driver from a feasible start.

    The trace records (cumulative evaluations, best stored value) after the
    initial evaluation and after every inner iteration; it is non-increasing
    by construction. A budget exhaustion inside an inner solve ends the run
    cleanly with the store intact.
    """
    x0 = np.asarray(x0, dtype=float)
    n = obj.dim
    cfg.validate(n)
    if not box.contains(x0):
        raise ValueError("starting point is infeasible")
    if cfg.variant is SamplingVariant.CONE_GRADIENT and not obj.has_gradient:
        raise ValueError("cone-gradient variant requires a gradient-capable objective")

    nm_cfg = cfg.nm
    if nm_cfg.initial_step is None:
        nm_cfg = replace(nm_cfg, initial_step=0.05 * float(np.mean(box.widths())))

    started = time.perf_counter()
    elapsed_ms = lambda: (time.perf_counter() - started) * 1e3

    trace = Trace(meta=trace_meta)
    store = BestStore(cfg.probes)
    f0 = penalised(obj, box, x0)
    store.insert(f0, x0)
    trace.append(obj.eval_count, 0, f0, elapsed_ms())

    inner_per_outer = cfg.total_inner // cfg.outer_iters
    total = cfg.outer_iters * inner_per_outer
    done = 0
    try:
        for i in range(1, cfg.outer_iters + 1):
            base = choose_base(n, cfg.base_dim, rng)
            for j in range(1, inner_per_outer + 1):
                beta = beta_schedule(
                    cfg.beta_mode, i, j, inner_per_outer, total, cfg.beta_growth
                )
                inner_iteration(obj, box, store, base, cfg, nm_cfg, beta, rng)
                done += 1
                trace.append(obj.eval_count, done, store.peek_best()[0], elapsed_ms())
    except BudgetExceededError:
        # budget is the intended stop; the store was restored downstream.
        # Surface the evaluations the aborted solve consumed as a final row.
        if obj.eval_count > trace.evals[-1]:
            trace.append(obj.eval_count, done + 1, store.peek_best()[0], elapsed_ms())

    f_best, x_best = store.peek_best()
    return SolarResult(
        x_best=x_best,
        f_best=f_best,
        trace=trace,
        eval_count=obj.eval_count,
        grad_count=obj.grad_count,
    )
