"""Random affine sections of R^n: base-index choice, slope sampling, ray evaluation.

A section is parameterised as a graph over ``b`` chosen coordinates: the ray

    r(t) = x1 + A (t - x1[B]),        A[B] = I_b,

passes through the anchor ``x1`` and agrees with ``t`` on the base indices B.
Slopes for the remaining rows of A are drawn either fully at random (tangent
of a uniform angle) or restricted to a cone around a dominant direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .oracle import Objective

# Margin keeping sampled angles strictly inside (-pi/2, pi/2). Offsets below
# ~1e-16 are not representable next to pi/2 in float64, so "machine zero"
# is realised as 1e-12 rad; tan stays bounded near 1e12.
ANGLE_CLIP = 1e-12


class SamplingVariant(Enum):
    VANILLA = "vanilla"
    CONE_GRADIENT = "cone-gradient"
    CONE_SECANT = "cone-secant"


@dataclass(frozen=True)
class BaseIndexSet:
    """b unique coordinate indices (0-based, sorted) out of n."""

    indices: np.ndarray
    n: int

    @property
    def b(self) -> int:
        return self.indices.size

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        object.__setattr__(self, "indices", idx)
        if not 1 <= idx.size < self.n:
            raise ValueError(f"need 1 <= b < n, got b={idx.size}, n={self.n}")
        if np.unique(idx).size != idx.size or np.any(np.diff(idx) < 0):
            raise ValueError("indices must be unique and sorted ascending")
        if idx.size and (idx[0] < 0 or idx[-1] >= self.n):
            raise ValueError("indices out of range")


@dataclass(frozen=True)
class RayMap:
    """Affine inclusion R^b -> R^n through ``anchor`` with slope matrix A."""

    anchor: np.ndarray
    base: BaseIndexSet
    matrix: np.ndarray  # shape (n, b), rows at base indices form I_b

    def __post_init__(self):
        n, b = self.base.n, self.base.b
        if self.anchor.shape != (n,):
            raise ValueError("anchor dimension does not match base")
        if self.matrix.shape != (n, b):
            raise ValueError("matrix must be n x b")
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("matrix entries must be finite")


@dataclass(frozen=True)
class ConeParams:
    """Cone restriction around a dominant direction g.

    Sampled angles stay within ``beta * half_angle`` of the direction's own
    angles, clipped to keep tan() finite.
    """

    direction: np.ndarray  # g, must be nonzero
    half_angle: float  # initial cone half-angle, radians in (0, pi/2)
    beta: float = 1.0  # iteration-dependent widening multiplier, >= 0
    clip: float = ANGLE_CLIP

    def __post_init__(self):
        if not 0.0 < self.half_angle < np.pi / 2:
            raise ValueError("half_angle must lie in (0, pi/2)")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")


def choose_base(n: int, b: int, rng: np.random.Generator) -> BaseIndexSet:
    """Uniformly random b-subset of {0, ..., n-1}, sorted."""
    if not 1 <= b < n:
        raise ValueError(f"need 1 <= b < n, got b={b}, n={n}")
    idx = np.sort(rng.choice(n, size=b, replace=False))
    return BaseIndexSet(idx, n)


def sample_vanilla(n: int, base: BaseIndexSet, rng: np.random.Generator) -> np.ndarray:
    """Fully random slopes: A_ij = tan(pi/2 * c_ij), c_ij ~ U(-1, 1).

    All n*b uniforms are drawn row-major and the base rows then overwritten
    with I_b, so a given seed consumes the stream identically across variants.
    """
    c = rng.uniform(-1.0, 1.0, size=(n, base.b))
    a = np.tan(0.5 * np.pi * c)
    a[base.indices, :] = np.eye(base.b)
    return a


def sample_cone(
    n: int, base: BaseIndexSet, cone: ConeParams, rng: np.random.Generator
) -> np.ndarray:
    """Slopes confined to a cone around the dominant direction.

    For non-base row i and base column j (base index B_j) the central angle
    is arctan(g_i / g_{B_j}); a zero denominator is the removable limit
    sign(g_i) * (pi/2 - clip). The sampled angle is uniform in the band
    [alpha - beta*a, alpha + beta*a] clipped into (-pi/2, pi/2), and the
    entry is its tangent. Base rows are overwritten with I_b.
    """
    g = np.asarray(cone.direction, dtype=float)
    if g.shape != (n,):
        raise ValueError("dominant direction has wrong dimension")
    if not np.any(g != 0.0):
        raise ValueError("dominant direction must be nonzero")

    lim = 0.5 * np.pi - cone.clip
    denom = g[base.indices]  # shape (b,)
    alpha = np.empty((n, base.b))
    nz = denom != 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha[:, nz] = np.arctan(g[:, None] / denom[nz][None, :])
    if np.any(~nz):
        alpha[:, ~nz] = np.sign(g)[:, None] * lim
    # arctan of a huge ratio can round to exactly pi/2; keep the band inside
    alpha = np.clip(alpha, -lim, lim)

    half = cone.beta * cone.half_angle
    lo = np.maximum(-lim, alpha - half)
    hi = np.minimum(alpha + half, lim)
    c = rng.uniform(-1.0, 1.0, size=(n, base.b))
    a = np.tan(0.5 * (hi + lo) + 0.5 * (hi - lo) * c)
    a[base.indices, :] = np.eye(base.b)
    return a


def ray_eval(ray: RayMap, t) -> np.ndarray:
    """r(t) = anchor + A (t - anchor[B]); base coordinates equal t exactly."""
    t = np.asarray(t, dtype=float)
    if t.shape != (ray.base.b,):
        raise ValueError(f"expected parameter of dimension {ray.base.b}, got shape {t.shape}")
    x = ray.anchor + ray.matrix @ (t - ray.anchor[ray.base.indices])
    # A[B] = I_b makes this an identity in exact arithmetic; enforce it
    # bit-exactly so the ray is a true graph over the base coordinates.
    x[ray.base.indices] = t
    return x


def dominant_direction(
    variant: SamplingVariant,
    best_points: Sequence[tuple[float, np.ndarray]],
    obj: Objective,
) -> Optional[np.ndarray]:
    """Direction g for cone sampling; None signals an unrestricted draw.

    ``best_points`` is sorted ascending by value. The gradient variant reads
    the oracle at the best point; the secant variant joins the two best
    points and degrades to None when only one is stored.
    """
    if not best_points:
        raise ValueError("best_points must be non-empty")
    if variant is SamplingVariant.VANILLA:
        return None
    if variant is SamplingVariant.CONE_GRADIENT:
        if not obj.has_gradient:
            raise ValueError("first-order sampling requires a gradient-capable objective")
        return obj.gradient(best_points[0][1])
    if variant is SamplingVariant.CONE_SECANT:
        if len(best_points) < 2:
            return None
        return np.asarray(best_points[1][1], float) - np.asarray(best_points[0][1], float)
    raise ValueError(f"unknown sampling variant {variant!r}")


def beta_schedule(
    mode: str,
    outer_iter: int,
    inner_iter: int,
    inner_per_outer: int,
    total_inner: int,
    growth: float = 1.0,
) -> float:
    """Cone-widening multiplier for 1-based iteration (outer_iter, inner_iter).

    "constant" is always 1; "growing" ramps linearly with the fraction of all
    inner iterations completed, from 1 on the first to 1 + growth on the last.
    """
    if mode == "constant":
        return 1.0
    if mode != "growing":
        raise ValueError(f"unknown beta mode {mode!r}")
    done = (outer_iter - 1) * inner_per_outer + (inner_iter - 1)
    if total_inner <= 1:
        return 1.0
    return 1.0 + growth * (done / (total_inner - 1))
