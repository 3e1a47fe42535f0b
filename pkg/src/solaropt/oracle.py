"""Objective wrappers with exact query accounting, and box feasible sets.

Infeasibility is encoded as the extended value ``math.inf``: ordinary float
comparisons then give the right ordering (+inf ranks worse than any finite
value, two +inf compare equal), so no wrapper type is needed.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

Array = np.ndarray

INFEASIBLE = math.inf


class BudgetExceededError(RuntimeError):
    """Raised by an Objective when its evaluation budget is exhausted.

    The offending query is rejected *before* the underlying function runs,
    so the counter never passes the cap.
    """


class BoxSet:
    """Axis-aligned closed box {x : lower <= x <= upper}, boundary included."""

    def __init__(self, lower, upper):
        self.lower = np.atleast_1d(np.asarray(lower, dtype=float))
        self.upper = np.atleast_1d(np.asarray(upper, dtype=float))
        if self.lower.shape != self.upper.shape or self.lower.ndim != 1:
            raise ValueError("lower and upper must be 1-d arrays of equal length")
        if self.lower.size < 1:
            raise ValueError("box must have dimension >= 1")
        if not np.all(self.lower < self.upper):
            raise ValueError("every lower bound must be strictly below its upper bound")

    @classmethod
    def symmetric(cls, dim: int, half_width: float) -> "BoxSet":
        """The cube [-half_width, half_width]^dim."""
        h = float(half_width)
        return cls(np.full(dim, -h), np.full(dim, h))

    @property
    def dim(self) -> int:
        return self.lower.size

    def widths(self) -> Array:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = self._check(x)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def indicator(self, x) -> float:
        """0 on the box, +inf outside."""
        return 0.0 if self.contains(x) else INFEASIBLE

    def project(self, x) -> Array:
        """Componentwise clamp onto the box; identity exactly on members."""
        x = self._check(x)
        return np.clip(x, self.lower, self.upper)

    def _check(self, x) -> Array:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected vector of dimension {self.dim}, got shape {x.shape}")
        return x

    def __repr__(self):
        return f"BoxSet(dim={self.dim}, lower={self.lower!r}, upper={self.upper!r})"


class Objective:
    """Deterministic scalar objective with per-query accounting.

    Every value query increments ``eval_count`` by exactly one and every
    gradient query increments ``grad_count``; algorithms never keep their
    own counters, so trace x-axes are oracle-truthful by construction.

    A single instance belongs to one run/thread; the wrapped callables may
    be shared freely.
    """

    def __init__(
        self,
        dim: int,
        fn: Callable[[Array], float],
        grad: Optional[Callable[[Array], Array]] = None,
        name: str = "",
        max_evals: Optional[int] = None,
    ):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(dim)
        self.name = name
        self._fn = fn
        self._grad = grad
        self.max_evals = max_evals
        self.eval_count = 0
        self.grad_count = 0

    @property
    def has_gradient(self) -> bool:
        return self._grad is not None

    def value(self, x) -> float:
        x = self._check(x)
        if self.max_evals is not None and self.eval_count >= self.max_evals:
            raise BudgetExceededError(
                f"evaluation budget of {self.max_evals} exhausted for objective {self.name!r}"
            )
        self.eval_count += 1
        return float(self._fn(x))

    def gradient(self, x) -> Array:
        if self._grad is None:
            raise ValueError(f"objective {self.name!r} provides no gradient")
        x = self._check(x)
        self.grad_count += 1
        return np.asarray(self._grad(x), dtype=float)

    def _check(self, x) -> Array:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected vector of dimension {self.dim}, got shape {x.shape}")
        return x

    def __repr__(self):
        return (
            f"Objective(name={self.name!r}, dim={self.dim}, "
            f"evals={self.eval_count}, grads={self.grad_count})"
        )


def penalised(obj: Objective, box: BoxSet, x) -> float:
    """f(x) + box indicator, short-circuited.

    Infeasible points return +inf without touching the oracle, so feasibility
    probing is free and evaluation counts stay comparable across algorithms.
    """
    if not box.contains(x):
        return INFEASIBLE
    return obj.value(x)
