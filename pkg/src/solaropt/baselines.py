"""Comparison algorithms sharing the Objective/BoxSet/Trace contracts.

Zeroth-order: two-point sphere-smoothing gradient descent (plain and with a
golden-section line search) and a deterministic momentum three-point scheme.
First-order: nonlinear conjugate gradients (Fletcher-Reeves or
Polak-Ribiere-Polyak, optional restarts). Global: simulated annealing and
monotonic sequence basin hopping.

All of them evaluate only feasible points (probes and proposals are clamped
onto the box), stop exactly at the evaluation budget, and emit a
non-increasing best-so-far trace whose x-axis is the oracle's own counter.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .inner_solver import NMConfig, nelder_mead
from .oracle import BoxSet, BudgetExceededError, Objective, penalised
from .trace import Trace

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class BaselineParams:
    """Shared hyperparameter bag; None means "derive a default from the box".

    Defaults: step_size 1e-2 * mean box width, jump_length 0.1 * mean box
    width, sa_initial_temp |f(x0)|. The budget is a hard cap on value queries.
    """

    algorithm: str = ""
    budget: Optional[int] = None
    step_size: Optional[float] = None  # h
    smoothing: float = 1e-5  # mu
    momentum: float = 0.9
    ls_max_backtracks: int = 30
    ls_shrink: float = 0.5
    gs_iters: int = 20
    cg_formula: str = "prp"  # "fr" | "prp"
    cg_c1: float = 1e-4
    restarts: bool = True
    powell_threshold: float = 0.2
    exact_quadratic_ls: bool = False
    sa_initial_temp: Optional[float] = None  # T0
    sa_cooling: float = 0.995  # rho_T
    jump_length: Optional[float] = None  # sigma_jump
    msbh_local_iters: int = 60
    msbh_nm_step: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.sa_cooling < 1.0:
            raise ValueError("sa_cooling must lie in (0, 1)")
        if self.cg_formula not in ("fr", "prp"):
            raise ValueError("cg_formula must be 'fr' or 'prp'")
        for name in ("smoothing", "ls_shrink"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


class _Run:
    """Bookkeeping shared by the baseline drivers.

    Routes every value query through one place so the running best and the
    trace stay oracle-truthful, and enforces the evaluation budget as a hard
    cap on the objective itself.
    """

    def __init__(self, obj: Objective, box: BoxSet, x0, params: BaselineParams, meta):
        self.obj = obj
        self.box = box
        self.x0 = np.asarray(x0, dtype=float)
        if not box.contains(self.x0):
            raise ValueError("starting point is infeasible")
        budget = params.budget if params.budget is not None else obj.max_evals
        if budget is None or budget < 1:
            raise ValueError("a positive evaluation budget is required")
        if obj.max_evals is None or obj.max_evals > budget:
            obj.max_evals = int(budget)
        self.best = math.inf
        self.trace = Trace(meta=meta)
        self._started = time.perf_counter()
        self.iteration = 0

    def ev(self, x) -> float:
        v = self.obj.value(x)
        self.observe(v)
        return v

    def observe(self, v: float) -> None:
        if v < self.best:
            self.best = v

    def record(self) -> None:
        self.iteration += 1
        self.trace.append(
            self.obj.eval_count,
            self.iteration,
            self.best,
            (time.perf_counter() - self._started) * 1e3,
        )

    def finish(self) -> Trace:
        # a budget abort mid-iteration still surfaces as one final row
        last = self.trace.evals[-1] if self.trace.evals else 0
        if self.obj.eval_count > last and math.isfinite(self.best):
            self.record()
        if not self.trace.evals:
            raise RuntimeError("budget too small to complete a single iteration")
        return self.trace


def _mean_width(box: BoxSet) -> float:
    return float(np.mean(box.widths()))


def _unit_sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        v = rng.standard_normal(n)
        norm = np.linalg.norm(v)
        if norm > 0:
            return v / norm


def _ball_point(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    u = _unit_sphere(rng, n)
    return u * radius * rng.uniform() ** (1.0 / n)


def _max_feasible_step(box: BoxSet, x, d) -> float:
    """Largest t >= 0 with x + t*d still inside the box."""
    t = math.inf
    for lo, hi, xi, di in zip(box.lower, box.upper, x, d):
        if di > 0:
            t = min(t, (hi - xi) / di)
        elif di < 0:
            t = min(t, (lo - xi) / di)
    return max(t, 0.0)


def _golden_section(phi, lo: float, hi: float, iters: int) -> tuple[float, float]:
    """Best point found by ``iters`` golden-section shrinks of [lo, hi]."""
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = phi(c), phi(d)
    best_t, best_f = (c, fc) if fc <= fd else (d, fd)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = phi(c)
            if fc < best_f:
                best_t, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = phi(d)
            if fd < best_f:
                best_t, best_f = d, fd
    return best_t, best_f


# ---------------------------------------------------------------------------
# zeroth-order methods


def _sphere_gradient(run: _Run, x, mu: float, rng) -> np.ndarray:
    """Two-point feedback estimate n * (f(x+mu u) - f(x-mu u)) / (2 mu) * u."""
    n = run.obj.dim
    u = _unit_sphere(rng, n)
    fp = run.ev(run.box.project(x + mu * u))
    fm = run.ev(run.box.project(x - mu * u))
    return n * (fp - fm) / (2.0 * mu) * u


def zo_gd(obj, box, x0, params: BaselineParams, rng, trace_meta=None) -> Trace:
    """Projected descent along the two-point sphere-smoothing estimate."""
    run = _Run(obj, box, x0, params, trace_meta)
    h = params.step_size if params.step_size is not None else 1e-2 * _mean_width(box)
    x = run.x0
    try:
        while True:
            ghat = _sphere_gradient(run, x, params.smoothing, rng)
            x = box.project(x - h * ghat)
            run.record()
    except BudgetExceededError:
        pass
    return run.finish()


def zo_gd_linesearch(obj, box, x0, params: BaselineParams, rng, trace_meta=None) -> Trace:
    """Same estimator, step length by golden section over the feasible segment.

    Steps are accepted only when they improve the current value, so the
    iterate sequence is monotone even though the direction is random.
    """
    run = _Run(obj, box, x0, params, trace_meta)
    x = run.x0
    try:
        fx = run.ev(x)
        while True:
            ghat = _sphere_gradient(run, x, params.smoothing, rng)
            d = -ghat
            t_max = _max_feasible_step(box, x, d)
            if np.all(d == 0.0) or t_max <= 0.0 or not math.isfinite(t_max):
                run.record()
                continue
            t_best, f_best = _golden_section(
                lambda t: run.ev(x + t * d), 0.0, t_max, params.gs_iters
            )
            if f_best < fx:
                x = x + t_best * d
                fx = f_best
            run.record()
    except BudgetExceededError:
        pass
    return run.finish()


def momentum_three_point(obj, box, x0, params: BaselineParams, rng, trace_meta=None) -> Trace:
    """Per iteration, the argmin of {incumbent, momentum step +/- h u}.

    The incumbent's value is cached, so each iteration costs two queries; a
    losing pair resets the momentum to zero.
    """
    run = _Run(obj, box, x0, params, trace_meta)
    h = params.step_size if params.step_size is not None else 1e-2 * _mean_width(box)
    x = run.x0
    v = np.zeros_like(x)
    try:
        fx = run.ev(x)
        while True:
            u = _unit_sphere(rng, obj.dim)
            drift = x + params.momentum * v
            plus = box.project(drift + h * u)
            minus = box.project(drift - h * u)
            f_plus = run.ev(plus)
            f_minus = run.ev(minus)
            best_f, best_x = fx, x
            if f_plus < best_f:
                best_f, best_x = f_plus, plus
            if f_minus < best_f:
                best_f, best_x = f_minus, minus
            v = best_x - x
            x, fx = best_x, best_f
            run.record()
    except BudgetExceededError:
        pass
    return run.finish()


# ---------------------------------------------------------------------------
# conjugate gradients


def _cg_beta(formula: str, g_new: np.ndarray, g_old: np.ndarray) -> float:
    denom = float(g_old @ g_old)
    if denom == 0.0:
        return 0.0
    if formula == "fr":
        return float(g_new @ g_new) / denom
    return max(0.0, float(g_new @ (g_new - g_old)) / denom)


def _exact_quadratic_step(obj: Objective, x, d) -> float:
    """Exact minimiser along d for quadratic objectives.

    The directional derivative of a quadratic is linear in the step, so two
    gradient queries pin it down: alpha* = -phi'(0) / (phi'(1) - phi'(0)).
    """
    phi0 = float(obj.gradient(x) @ d)
    phi1 = float(obj.gradient(x + d) @ d)
    if phi1 == phi0:
        return 0.0
    return -phi0 / (phi1 - phi0)


def cg(obj, box, x0, params: BaselineParams, rng, trace_meta=None) -> Trace:
    """Nonlinear conjugate gradients with projection onto the box.

    Armijo backtracking by default (initial step carried over and regrown);
    ``exact_quadratic_ls`` switches to the two-gradient exact step used by
    the finite-termination test. Restarts (steepest-descent reset) fire every
    n iterations or on the Powell orthogonality test when enabled.
    """
    run = _Run(obj, box, x0, params, trace_meta)
    n = obj.dim
    grad_tol = 1e-12
    x = run.x0
    try:
        fx = run.ev(x)
        g = obj.gradient(x)
        d = -g
        alpha_prev = None
        k = 0
        while True:
            gnorm2 = float(g @ g)
            if math.sqrt(gnorm2) <= grad_tol:
                break
            gd = float(g @ d)
            if gd >= 0.0:  # conjugacy produced a non-descent direction
                d = -g
                gd = -gnorm2
            if params.exact_quadratic_ls:
                alpha = _exact_quadratic_step(obj, x, d)
                if alpha <= 0.0:
                    break
                x_new = box.project(x + alpha * d)
                f_new = run.ev(x_new)
            else:
                alpha = 1.0 / max(1.0, math.sqrt(gnorm2)) if alpha_prev is None else 2.0 * alpha_prev
                accepted = False
                for _ in range(params.ls_max_backtracks):
                    x_try = box.project(x + alpha * d)
                    f_try = run.ev(x_try)
                    if f_try <= fx + params.cg_c1 * alpha * gd:
                        accepted = True
                        break
                    alpha *= params.ls_shrink
                if not accepted:
                    if np.array_equal(d, -g):
                        break  # stalled even along steepest descent
                    d = -g
                    run.record()
                    continue
                x_new, f_new = x_try, f_try
            g_new = obj.gradient(x_new)
            beta = _cg_beta(params.cg_formula, g_new, g)
            k += 1
            if params.restarts:
                powell = abs(float(g_new @ g)) >= params.powell_threshold * float(g_new @ g_new)
                if k % n == 0 or powell:
                    beta = 0.0
            d = -g_new + beta * d
            x, g, fx = x_new, g_new, f_new
            alpha_prev = alpha
            run.record()
    except BudgetExceededError:
        pass
    return run.finish()


# ---------------------------------------------------------------------------
# global heuristics


def simulated_annealing(obj, box, x0, params: BaselineParams, rng, trace_meta=None) -> Trace:
    """Metropolis walk with Gaussian proposals and geometric cooling."""
    run = _Run(obj, box, x0, params, trace_meta)
    sigma = params.jump_length if params.jump_length is not None else 0.1 * _mean_width(box)
    x = run.x0
    try:
        fx = run.ev(x)
        temp = params.sa_initial_temp if params.sa_initial_temp is not None else abs(fx)
        temp = max(float(temp), 1e-300)
        while True:
            proposal = box.project(x + sigma * rng.standard_normal(obj.dim))
            f_prop = run.ev(proposal)
            delta = f_prop - fx
            if delta < 0.0 or rng.uniform() < math.exp(-delta / max(temp, 1e-300)):
                x, fx = proposal, f_prop
            temp *= params.sa_cooling
            run.record()
    except BudgetExceededError:
        pass
    return run.finish()


def msbh(obj, box, x0, params: BaselineParams, rng, trace_meta=None) -> Trace:
    """Monotonic sequence basin hopping.

    Perturb the incumbent by a uniform jump in a ball, minimise locally with
    a budgeted Nelder-Mead on the box-penalised objective, and accept the hop
    only on strict improvement.
    """
    run = _Run(obj, box, x0, params, trace_meta)
    sigma = params.jump_length if params.jump_length is not None else 0.1 * _mean_width(box)
    nm_step = params.msbh_nm_step if params.msbh_nm_step is not None else 0.05 * _mean_width(box)
    nm_cfg = NMConfig(max_iterations=params.msbh_local_iters, initial_step=nm_step)
    fn = lambda z: penalised(obj, box, z)
    x = run.x0
    try:
        fx = run.ev(x)
        while True:
            y = box.project(x + _ball_point(rng, obj.dim, sigma))
            x_loc, f_loc = nelder_mead(fn, y, nm_cfg)
            run.observe(f_loc)  # NM queries bypass ev(); its minimum is f_loc
            if f_loc < fx:
                x, fx = x_loc, f_loc
            run.record()
    except BudgetExceededError:
        pass
    return run.finish()
