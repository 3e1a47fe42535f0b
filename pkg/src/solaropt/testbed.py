"""Benchmark problems: random convex quadratics and three classic global surfaces.

Every instance carries its box, starting point, and (where known) optimum, so
the harness can compute relative suboptimality and validate records.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .oracle import BoxSet, Objective

Array = np.ndarray


# ---------------------------------------------------------------------------
# random convex quadratics


@dataclass
class QuadraticInstance:
    """f(x) = x' M x + b' x + c with M = A A' and A_ij ~ U(0, scale).

    kappa is the eigenvalue ratio of M, kept as a diagnostic; the instances
    are deliberately ill-conditioned.
    """

    matrix: Array  # M, symmetric PSD
    linear: Array  # b
    offset: float  # c
    scale: float
    seed: int
    kappa: float

    @property
    def dim(self) -> int:
        return self.linear.size

    def value(self, x: Array) -> float:
        return float(x @ self.matrix @ x + self.linear @ x + self.offset)

    def gradient(self, x: Array) -> Array:
        return 2.0 * (self.matrix @ x) + self.linear

    def minimiser(self) -> Array:
        """Unconstrained argmin, -M^{-1} b / 2, by direct linear solve."""
        return np.linalg.solve(2.0 * self.matrix, -self.linear)


def make_quadratic(n: int, scale: float, seed: int) -> QuadraticInstance:
    """Draw A ~ U(0, scale)^{n x n}, b ~ U(0,1)^n, c ~ U(0,1) from one seed."""
    if n < 1 or scale <= 0:
        raise ValueError("need n >= 1 and scale > 0")
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.0, scale, size=(n, n))
    m = a @ a.T
    b = rng.uniform(0.0, 1.0, size=n)
    c = float(rng.uniform(0.0, 1.0))
    eig = np.linalg.eigvalsh(m)
    kappa = float(eig[-1] / eig[0]) if eig[0] > 0 else float("inf")
    return QuadraticInstance(matrix=m, linear=b, offset=c, scale=float(scale), seed=int(seed), kappa=kappa)


# ---------------------------------------------------------------------------
# fixed test surfaces


def rosenbrock_skokov(x) -> float:
    """(1 - x_1)^2 + 100 * sum_i (x_i - x_{i-1}^2)^2, chained over all coordinates."""
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("needs dimension >= 2")
    d = x[1:] - x[:-1] ** 2
    return float((1.0 - x[0]) ** 2 + 100.0 * np.sum(d * d))


def rosenbrock_skokov_grad(x) -> Array:
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("needs dimension >= 2")
    d = x[1:] - x[:-1] ** 2
    g = np.zeros_like(x)
    g[0] = -2.0 * (1.0 - x[0])
    g[:-1] += -400.0 * x[:-1] * d
    g[1:] += 200.0 * d
    return g


def rastrigin(x) -> float:
    """Classical form 10 n + sum(x_i^2 - 10 cos(2 pi x_i)); zero at the origin."""
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def rastrigin_grad(x) -> Array:
    x = np.asarray(x, dtype=float)
    return 2.0 * x + 20.0 * np.pi * np.sin(2.0 * np.pi * x)


# 24 sample times t_i = 0.1 (i - 1) and the target series they generate
_DVG2_T = np.arange(24) / 10.0
_DVG2_TRUE = np.array([53.81, 1.27, 3.012, 2.13, 0.507])


def _dvg02_model(x1, x2, x3, x4, x5, t):
    return x1 * x2**t * np.tanh(x3 * t + np.sin(x4 * t)) * np.cos(t * np.exp(x5))


_DVG2_Y = _dvg02_model(*_DVG2_TRUE, _DVG2_T)


def devilliers_glasser_02(x) -> float:
    """Least-squares fit of a 5-parameter damped growth model to 24 samples."""
    x = np.asarray(x, dtype=float)
    if x.shape != (5,):
        raise ValueError("needs dimension 5")
    if x[1] <= 0:
        raise ValueError("x2 must be positive (fractional powers of the base)")
    r = _dvg02_model(*x, _DVG2_T) - _DVG2_Y
    return float(np.sum(r * r))


def devilliers_glasser_02_grad(x) -> Array:
    x = np.asarray(x, dtype=float)
    if x.shape != (5,):
        raise ValueError("needs dimension 5")
    x1, x2, x3, x4, x5 = x
    if x2 <= 0:
        raise ValueError("x2 must be positive (fractional powers of the base)")
    t = _DVG2_T
    pw = x2**t
    u = x3 * t + np.sin(x4 * t)
    th = np.tanh(u)
    sech2 = 1.0 - th * th
    w = t * np.exp(x5)
    cw = np.cos(w)
    model = x1 * pw * th * cw
    r = model - _DVG2_Y
    dr = np.empty((5, t.size))
    dr[0] = pw * th * cw
    dr[1] = x1 * t * x2 ** (t - 1.0) * th * cw
    dr[2] = x1 * pw * sech2 * t * cw
    dr[3] = x1 * pw * sech2 * t * np.cos(x4 * t) * cw
    dr[4] = -x1 * pw * th * np.sin(w) * w
    return 2.0 * (dr @ r)


# ---------------------------------------------------------------------------
# instance catalogue


@dataclass
class ProblemInstance:
    """A named problem: objective callables, feasible box, start, known optimum."""

    name: str
    dim: int
    fn: Callable[[Array], float]
    grad: Optional[Callable[[Array], Array]]
    box: BoxSet
    x0: Array
    f_star: Optional[float] = None
    x_star: Optional[Array] = None
    seed: Optional[int] = None  # generator seed for synthetic instances
    kappa: Optional[float] = None

    def __post_init__(self):
        self.x0 = np.asarray(self.x0, dtype=float)
        if not self.box.contains(self.x0):
            raise ValueError(f"starting point of {self.name!r} is infeasible")

    def make_objective(self, max_evals: Optional[int] = None) -> Objective:
        """Fresh counting oracle for one run; instances stay immutable."""
        return Objective(self.dim, self.fn, grad=self.grad, name=self.name, max_evals=max_evals)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "box": {"lower": self.box.lower.tolist(), "upper": self.box.upper.tolist()},
            "x0": self.x0.tolist(),
            "seed": self.seed,
            "f_star": self.f_star,
            "x_star": None if self.x_star is None else np.asarray(self.x_star).tolist(),
            "kappa": self.kappa,
        }


# seeds pinned so the unconstrained minimiser is box-interior and the
# condition number lands on the published order of magnitude
_QUAD_SPECS = {
    "quad-10": dict(n=10, scale=1.0, seed=0, half_width=20.0),
    "quad-25": dict(n=25, scale=5.0 * np.sqrt(2.0), seed=4, half_width=5.0),
    "quad-50": dict(n=50, scale=np.sqrt(10.0), seed=0, half_width=5.0),
}


def _quadratic_instance(name: str, n: int, scale: float, seed: int, half_width: float) -> ProblemInstance:
    quad = make_quadratic(n, scale, seed)
    box = BoxSet.symmetric(n, half_width)
    # start drawn from the middle half of the box, decoupled from the
    # coefficient stream so the surface is independent of the start
    rng = np.random.default_rng([seed, 1])
    x0 = box.project(rng.uniform(0.5 * box.lower, 0.5 * box.upper))
    x_star = quad.minimiser()
    f_star = None
    if box.contains(x_star):
        f_star = quad.value(x_star)
    else:
        x_star = None
    return ProblemInstance(
        name=name,
        dim=n,
        fn=quad.value,
        grad=quad.gradient,
        box=box,
        x0=x0,
        f_star=f_star,
        x_star=x_star,
        seed=seed,
        kappa=quad.kappa,
    )


def catalogue() -> list[ProblemInstance]:
    """The six benchmark instances, in canonical order."""
    instances = [
        _quadratic_instance(name, **spec) for name, spec in _QUAD_SPECS.items()
    ]
    instances.append(
        ProblemInstance(
            name="rosenbrock-skokov-100",
            dim=100,
            fn=rosenbrock_skokov,
            grad=rosenbrock_skokov_grad,
            box=BoxSet.symmetric(100, 3.0),
            x0=np.full(100, 0.1),
            f_star=0.0,
            x_star=np.ones(100),
        )
    )
    instances.append(
        ProblemInstance(
            name="rastrigin-200",
            dim=200,
            fn=rastrigin,
            grad=rastrigin_grad,
            box=BoxSet.symmetric(200, 5.12),
            x0=np.full(200, 5.0),
            f_star=0.0,
            x_star=np.zeros(200),
        )
    )
    instances.append(
        ProblemInstance(
            name="dvg02-5",
            dim=5,
            fn=devilliers_glasser_02,
            grad=devilliers_glasser_02_grad,
            box=BoxSet(np.ones(5), np.full(5, 60.0)),
            x0=np.full(5, 30.0),
            f_star=0.0,
            x_star=_DVG2_TRUE.copy(),
        )
    )
    return instances


def catalogue_by_name(name: str) -> ProblemInstance:
    for inst in catalogue():
        if inst.name == name:
            return inst
    known = ", ".join(i.name for i in catalogue())
    raise KeyError(f"unknown instance {name!r}; known: {known}")


def instance_from_spec(spec: dict) -> ProblemInstance:
    """Build an instance from an inline config document.

    Either {"name": "<catalogue name>"} or
    {"type": "quadratic", "n": ..., "scale": ..., "seed": ..., "half_width": ...}.
    """
    if isinstance(spec, str):
        return catalogue_by_name(spec)
    if "name" in spec and len(spec) == 1:
        return catalogue_by_name(spec["name"])
    if spec.get("type") == "quadratic":
        keys = {"type", "n", "scale", "seed", "half_width", "name"}
        unknown = set(spec) - keys
        if unknown:
            raise ValueError(f"unknown instance keys: {sorted(unknown)}")
        name = spec.get("name", f"quad-{spec['n']}-s{spec['seed']}")
        return _quadratic_instance(
            name, int(spec["n"]), float(spec["scale"]), int(spec["seed"]), float(spec["half_width"])
        )
    raise ValueError(f"unintelligible instance spec: {spec!r}")


def catalogue_json(indent: int = 2) -> str:
    return json.dumps([inst.to_dict() for inst in catalogue()], indent=indent)
