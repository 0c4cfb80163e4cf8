"""Readout maps with known right-inverses: the softmax simplex chart, gauge
(Minkowski functional) charts onto convex bodies, metric projections onto
simple convex shapes, and the shrinking homotopies that make boundaries
negligible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import DomainError, ValidationError

__all__ = [
    "softmax_chart",
    "gauge_chart",
    "project_convex",
    "homotopy_shrink",
    "Box",
    "Ball",
    "Simplex",
    "Star",
    "ReadoutSpec",
]


def _vec(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).ravel()
    if not np.all(np.isfinite(v)):
        raise ValidationError("input has non-finite entries")
    return v


# -- softmax -----------------------------------------------------------------

def softmax_chart(direction: str, v) -> np.ndarray:
    """Softmax chart of the open simplex.

    forward: R^{C-1} -> int(simplex_C), v -> softmax(v_1, ..., v_{C-1}, 1).
    inverse: y -> (ln y_c - ln y_C + 1)_{c<C}; exact right inverse of the
    forward map on the open simplex.
    """
    v = _vec(v)
    if direction == "forward":
        z = np.concatenate([v, [1.0]])
        z = z - np.max(z)
        e = np.exp(z)
        return e / e.sum()
    if direction == "inverse":
        if v.size < 2:
            raise ValidationError("simplex point needs at least 2 coordinates")
        if abs(float(v.sum()) - 1.0) > 1e-12:
            raise ValidationError("simplex point must sum to 1")
        if np.any(v <= 0.0):
            raise DomainError("softmax inverse is undefined on the simplex boundary")
        logs = np.log(v)
        return logs[:-1] - logs[-1] + 1.0
    raise ValidationError(f"direction must be 'forward' or 'inverse', got {direction!r}")


# -- gauge -------------------------------------------------------------------

def gauge_chart(mu: Callable[[np.ndarray], float], direction: str, v) -> np.ndarray:
    """Gauge chart of a convex body containing 0.

    forward: y -> y / (1 + mu(y)) maps onto the interior (mu < 1);
    inverse: z -> z / (1 - mu(z)), defined for mu(z) < 1.
    """
    v = _vec(v)
    g = float(mu(v))
    if g < 0.0 or not math.isfinite(g):
        raise ValidationError(f"gauge value must be finite and nonnegative, got {g!r}")
    if direction == "forward":
        return v / (1.0 + g)
    if direction == "inverse":
        if g >= 1.0:
            raise DomainError(f"gauge inverse needs mu(v) < 1, got {g!r}")
        return v / (1.0 - g)
    raise ValidationError(f"direction must be 'forward' or 'inverse', got {direction!r}")


# -- metric projection -------------------------------------------------------

@dataclass(frozen=True)
class Box:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=float).ravel()
        hi = np.asarray(self.hi, dtype=float).ravel()
        if lo.size != hi.size or np.any(lo > hi):
            raise ValidationError("box needs lo <= hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    r: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).ravel()
        if not (self.r > 0.0):
            raise ValidationError(f"ball radius must be positive, got {self.r!r}")
        object.__setattr__(self, "center", c)


@dataclass(frozen=True)
class Simplex:
    C: int

    def __post_init__(self):
        if self.C < 1:
            raise ValidationError("simplex needs C >= 1")


@dataclass(frozen=True)
class Star:
    anchor: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "anchor", np.asarray(self.anchor, dtype=float).ravel())


Shape = Union[Box, Ball, Simplex]


def _project_simplex(y: np.ndarray, C: int) -> np.ndarray:
    # sort-and-threshold Euclidean projection onto the probability simplex
    if y.size != C:
        raise ValidationError(f"expected a length-{C} vector, got {y.size}")
    u = np.sort(y)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, C + 1)
    cond = u - (css - 1.0) / ks > 0.0
    rho = int(np.nonzero(cond)[0][-1]) + 1
    tau = (css[rho - 1] - 1.0) / rho
    return np.maximum(y - tau, 0.0)


def project_convex(shape: Shape, y) -> np.ndarray:
    """Euclidean metric projection onto a box, ball, or probability simplex."""
    y = _vec(y)
    if isinstance(shape, Box):
        if y.size != shape.lo.size:
            raise ValidationError("point dimension does not match the box")
        return np.clip(y, shape.lo, shape.hi)
    if isinstance(shape, Ball):
        if y.size != shape.center.size:
            raise ValidationError("point dimension does not match the ball")
        d = y - shape.center
        n = float(np.linalg.norm(d))
        if n <= shape.r:
            return y.copy()
        return shape.center + (shape.r / n) * d
    if isinstance(shape, Simplex):
        return _project_simplex(y, shape.C)
    raise ValidationError(f"unsupported shape {shape!r}")


# -- shrinking homotopies ----------------------------------------------------

def homotopy_shrink(shape: Union[Star, Simplex], t: float, y) -> np.ndarray:
    """Straight-line homotopy pulling a star-shaped set toward its anchor.

    H_1 = identity; H_0 maps everything to the anchor (0 for a star about
    the origin, the barycenter for the simplex); for t < 1 the simplex image
    is interior.
    """
    y = _vec(y)
    if not (0.0 <= t <= 1.0):
        raise ValidationError(f"homotopy time must be in [0,1], got {t!r}")
    if isinstance(shape, Star):
        a = shape.anchor
        if a.size != y.size:
            raise ValidationError("point dimension does not match the anchor")
        return a + t * (y - a)
    if isinstance(shape, Simplex):
        if y.size != shape.C:
            raise ValidationError(f"expected a length-{shape.C} vector, got {y.size}")
        if abs(float(y.sum()) - 1.0) > 1e-9 or np.any(y < -1e-12):
            raise ValidationError("simplex homotopy needs a simplex point")
        bary = np.full(shape.C, 1.0 / shape.C)
        return bary + t * (y - bary)
    raise ValidationError(f"unsupported shape {shape!r}")


# -- closed readout descriptors for pipelines --------------------------------

@dataclass(frozen=True)
class ReadoutSpec:
    """Closed readout descriptor applied to the concatenated branch outputs.

    kind: "softmax" (needs C), "gauge" (needs mu), or "project"
    (needs shape).  Closed descriptors keep right-inverse availability a
    static property of the model.
    """

    kind: str
    C: int = 0
    mu: Optional[Callable[[np.ndarray], float]] = None
    shape: Optional[Shape] = None

    def __post_init__(self):
        if self.kind == "softmax":
            if self.C < 2:
                raise ValidationError("softmax readout needs C >= 2")
        elif self.kind == "gauge":
            if self.mu is None:
                raise ValidationError("gauge readout needs a gauge callable")
        elif self.kind == "project":
            if self.shape is None:
                raise ValidationError("projection readout needs a shape")
        else:
            raise ValidationError(f"unknown readout kind {self.kind!r}")

    def apply(self, v: np.ndarray) -> np.ndarray:
        if self.kind == "softmax":
            if v.size != self.C - 1:
                raise ValidationError(
                    f"softmax readout expects {self.C - 1} inputs, got {v.size}"
                )
            return softmax_chart("forward", v)
        if self.kind == "gauge":
            return gauge_chart(self.mu, "forward", v)
        return project_convex(self.shape, v)

    def right_inverse(self, y: np.ndarray) -> np.ndarray:
        if self.kind == "softmax":
            return softmax_chart("inverse", y)
        if self.kind == "gauge":
            return gauge_chart(self.mu, "inverse", y)
        # metric projection: inclusion is a right inverse on the shape
        return np.asarray(y, dtype=float).ravel().copy()
