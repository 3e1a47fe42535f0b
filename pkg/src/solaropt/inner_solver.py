"""Fixed-budget Nelder-Mead simplex for extended-valued objectives.

The solver minimises callables that may return +inf (infeasible points);
infinite vertices simply rank worst, which lets the simplex retreat into the
feasible slice without any projection logic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .oracle import BoxSet, Objective, penalised
from .subspace import RayMap, ray_eval


@dataclass
class NMConfig:
    """Simplex coefficients and budget.

    ``initial_step`` is the edge scale of the axis-aligned starting simplex;
    None means "derive from context" (callers use 5% of the mean box width).
    One iteration is one reflect/expand/contract/shrink cycle, so the solver
    issues at most 1 + b + max_iterations * (b + 2) evaluations.
    """

    max_iterations: int = 10
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    initial_step: Optional[float] = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.reflection <= 0 or self.expansion <= self.reflection:
            raise ValueError("need expansion > reflection > 0")
        if not 0 < self.contraction < 1 or not 0 < self.shrink < 1:
            raise ValueError("contraction and shrink must lie in (0, 1)")
        if self.initial_step is not None and self.initial_step <= 0:
            raise ValueError("initial_step must be positive")


@dataclass(frozen=True)
class RestrictedProblem:
    """The objective pulled back through a ray, with the box folded in.

    value(t) = f(r(t)) if r(t) is feasible else +inf; infeasible parameters
    cost no oracle query.
    """

    ray: RayMap
    obj: Objective
    box: BoxSet

    def value(self, t) -> float:
        return penalised(self.obj, self.box, ray_eval(self.ray, t))


def initial_simplex(t0, step: float) -> list[np.ndarray]:
    """Axis-aligned simplex {t0} + {t0 + step * e_j}; t0 is vertex 0."""
    if step <= 0:
        raise ValueError("step must be positive")
    t0 = np.asarray(t0, dtype=float)
    verts = [t0.copy()]
    for j in range(t0.size):
        v = t0.copy()
        v[j] += step
        verts.append(v)
    return verts


def nelder_mead(
    fn: Callable[[np.ndarray], float], t0, cfg: NMConfig
) -> tuple[np.ndarray, float]:
    """Minimise ``fn`` from ``t0`` for exactly cfg.max_iterations cycles.

    ``fn`` may return +inf, but its value at t0 must be finite. Returns the
    best vertex, whose value never exceeds fn(t0).
    """
    t0 = np.asarray(t0, dtype=float)
    step = cfg.initial_step if cfg.initial_step is not None else 1.0
    verts = initial_simplex(t0, step)
    vals = [float(fn(v)) for v in verts]
    if not np.isfinite(vals[0]):
        raise ValueError("starting point must have a finite value")

    b = t0.size
    for _ in range(cfg.max_iterations):
        order = np.argsort(vals, kind="stable")
        verts = [verts[i] for i in order]
        vals = [vals[i] for i in order]

        centroid = np.mean(verts[:-1], axis=0)
        reflected = centroid + cfg.reflection * (centroid - verts[-1])
        f_r = float(fn(reflected))

        if f_r < vals[0]:
            expanded = centroid + cfg.expansion * (reflected - centroid)
            f_e = float(fn(expanded))
            if f_e < f_r:
                verts[-1], vals[-1] = expanded, f_e
            else:
                verts[-1], vals[-1] = reflected, f_r
        elif f_r < vals[-2]:
            verts[-1], vals[-1] = reflected, f_r
        else:
            if f_r < vals[-1]:
                contracted = centroid + cfg.contraction * (reflected - centroid)
                f_c = float(fn(contracted))
                accept = f_c <= f_r
            else:
                contracted = centroid - cfg.contraction * (centroid - verts[-1])
                f_c = float(fn(contracted))
                accept = f_c < vals[-1]
            if accept:
                verts[-1], vals[-1] = contracted, f_c
            else:
                best = verts[0]
                for i in range(1, b + 1):
                    verts[i] = best + cfg.shrink * (verts[i] - best)
                    vals[i] = float(fn(verts[i]))

    i_best = int(np.argmin(vals))
    return verts[i_best].copy(), float(vals[i_best])
