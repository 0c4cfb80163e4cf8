"""Manifold descriptors, curvature-derived radii, and the universality-radius
calculus.

Extended reals are plain Python floats with ``math.inf`` as the maximal
element; no wrapper type is used.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from ..errors import NumericError, ParseError, UnsupportedError, ValidationError

__all__ = [
    "ManifoldSpec",
    "DeltaBound",
    "resolve_manifold",
    "k_star",
    "delta_bound",
    "universality_radius",
    "unit_ball_volume",
    "sphere_surface_area",
]

_ID_RE = re.compile(
    r"^(euclidean|sphere|poincare|spd|gaussian|torus|rp):(\d+)(?::([0-9.eE+-]+))?$"
)

_VALID_FORMS = (
    "euclidean:p, sphere:p, poincare:p:c, spd:n, gaussian:n, torus:m, rp:m "
    "(positive integer parameters, c > 0)"
)


@dataclass(frozen=True)
class ManifoldSpec:
    """A closed-form geometry from the zoo.

    Attributes
    ----------
    id : str
        Canonical identifier, e.g. ``"sphere:2"`` or ``"poincare:3:0.5"``.
    family : str
        One of euclidean, sphere, poincare, spd, gaussian, torus, rp.
    dim : int
        Intrinsic dimension p.
    chart_dim : int
        Dimension of the tangent/chart representation (ambient p+1 for
        sphere and rp, p otherwise).
    point_dim : int
        Length of the coordinate vector representing a point.
    curvature_bound : float
        Nonnegative bound on |sectional curvature|.
    curvature_max : float
        Signed upper bound on sectional curvature; this is the quantity the
        K-star map is applied to (nonpositive for Cartan-Hadamard members).
    inj_lower : callable point -> float
        Lower bound on the injectivity radius at a point, in (0, +inf].
    volume_of_ball : callable (point, r) -> float, optional
        Intrinsic volume of the metric ball; only wired for geometries with
        a closed-form or 1-D-quadrature radial volume element.
    param : float
        Family parameter: matrix order n for spd/gaussian, curvature c for
        poincare, 0 otherwise.
    """

    id: str
    family: str
    dim: int
    chart_dim: int
    point_dim: int
    curvature_bound: float
    curvature_max: float
    inj_lower: Callable[[np.ndarray], float] = field(repr=False)
    volume_of_ball: Optional[Callable[[np.ndarray, float], float]] = field(
        default=None, repr=False
    )
    param: float = 0.0


def unit_ball_volume(p: int) -> float:
    """Volume of the Euclidean unit ball in dimension p."""
    return math.pi ** (p / 2.0) / math.gamma(p / 2.0 + 1.0)


def sphere_surface_area(p: int) -> float:
    """Surface area of the unit sphere S^(p-1) embedded in R^p."""
    return 2.0 * math.pi ** (p / 2.0) / math.gamma(p / 2.0)


def _quad_radial_volume(area: float, density: Callable[[float], float], r: float,
                        panels: int = 512) -> float:
    # composite Simpson on the radial volume element; integrand is smooth
    if r <= 0.0:
        return 0.0
    n = 2 * panels
    ts = np.linspace(0.0, r, n + 1)
    ys = np.array([density(t) for t in ts])
    h = r / n
    simpson = ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum()
    return area * simpson * h / 3.0


def _sphere_ball_volume(p: int) -> Callable[[np.ndarray, float], float]:
    area = sphere_surface_area(p)

    def vol(_x: np.ndarray, r: float) -> float:
        r = min(r, math.pi)
        return _quad_radial_volume(area, lambda t: math.sin(t) ** (p - 1), r)

    return vol


def _poincare_ball_volume(p: int, c: float) -> Callable[[np.ndarray, float], float]:
    area = sphere_surface_area(p)
    sc = math.sqrt(c)

    def vol(_x: np.ndarray, r: float) -> float:
        return _quad_radial_volume(area, lambda t: (math.sinh(sc * t) / sc) ** (p - 1), r)

    return vol


def _euclidean_ball_volume(p: int) -> Callable[[np.ndarray, float], float]:
    w = unit_ball_volume(p)

    def vol(_x: np.ndarray, r: float) -> float:
        return w * r ** p

    return vol


def resolve_manifold(identifier: str) -> ManifoldSpec:
    """Parse a manifold identifier into its spec.

    Raises
    ------
    ParseError
        Unknown identifier shape or family.
    ValidationError
        Nonpositive dimension or curvature parameter.
    """
    m = _ID_RE.match(identifier.strip())
    if m is None:
        raise ParseError(
            f"unrecognized manifold identifier {identifier!r}; valid forms: {_VALID_FORMS}"
        )
    family, p_str, c_str = m.group(1), m.group(2), m.group(3)
    p = int(p_str)
    if p < 1:
        raise ValidationError(f"manifold parameter must be positive, got {p}")
    if family == "poincare":
        if c_str is None:
            raise ParseError("poincare requires a curvature parameter: poincare:p:c")
        c = float(c_str)
        if not (c > 0.0 and math.isfinite(c)):
            raise ValidationError(f"poincare curvature must be finite and > 0, got {c}")
    elif c_str is not None:
        raise ParseError(f"{family} takes a single integer parameter")

    inf = math.inf
    if family == "euclidean":
        return ManifoldSpec(f"euclidean:{p}", family, p, p, p, 0.0, 0.0,
                            lambda x: inf, _euclidean_ball_volume(p))
    if family == "sphere":
        return ManifoldSpec(f"sphere:{p}", family, p, p + 1, p + 1, 1.0, 1.0,
                            lambda x: math.pi, _sphere_ball_volume(p))
    if family == "poincare":
        cid = f"poincare:{p}:{c!r}"  # repr round-trips the curvature exactly
        return ManifoldSpec(cid, family, p, p, p, c, -c,
                            lambda x: inf, _poincare_ball_volume(p, c), param=c)
    if family == "spd":
        d = p * (p + 1) // 2
        # |K| <= 1/2 for the affine-invariant metric; flat directions exist,
        # so the signed maximum is 0.
        return ManifoldSpec(f"spd:{p}", family, d, d, d, 0.5, 0.0,
                            lambda x: inf, None, param=float(p))
    if family == "gaussian":
        d = p + p * (p + 1) // 2
        return ManifoldSpec(f"gaussian:{p}", family, d, d, d, 0.0, 0.0,
                            lambda x: inf, None, param=float(p))
    if family == "torus":
        return ManifoldSpec(f"torus:{p}", family, p, p, p, 0.0, 0.0,
                            lambda x: 0.5, None)
    if family == "rp":
        return ManifoldSpec(f"rp:{p}", family, p, p + 1, p + 1, 1.0, 1.0,
                            lambda x: math.pi / 2.0, None)
    raise ParseError(f"unrecognized manifold family {family!r}")  # pragma: no cover


def k_star(K: float) -> float:
    """Map a curvature value to the radius cap pi/(4 sqrt(K)), +inf for K <= 0."""
    if not math.isfinite(K):
        raise ValidationError("k_star expects a finite curvature value")
    if K > 0.0:
        return math.pi / (4.0 * math.sqrt(K))
    return math.inf


class DeltaBound(NamedTuple):
    """Result of the volume-ratio injectivity bound.

    ``unbounded`` flags a supremum still increasing at the truncation radius
    (the flat Euclidean case, where the true supremum is infinite).
    """

    value: float
    r_at: float
    unbounded: bool


def delta_bound(spec: ManifoldSpec, x: np.ndarray, K_cap: float,
                grid: int = 256, r_max: float = 1e6) -> DeltaBound:
    """Certified lower bound on the injectivity radius at ``x``.

    Evaluates sup over 0 < r < min(K_cap, r_max) of

        r * Vol(B(x, r)) / (Vol(B(x, r)) + Vol_tangent(B(0, 2r)))

    by grid search over log-spaced radii.  Any feasible r certifies the
    bound, so the grid search is sound; refinement can only improve it.
    The tangent ball uses the intrinsic dimension.
    """
    if spec.volume_of_ball is None:
        raise UnsupportedError(
            f"{spec.id} has no ball-volume callable; delta_bound is unavailable"
        )
    if grid < 16:
        raise ValidationError(f"grid must be at least 16, got {grid}")
    hi = min(K_cap, r_max)
    if not (hi > 0.0):
        raise ValidationError("radius cap must be positive")
    tangent_vol = _euclidean_ball_volume(spec.dim)
    rs = np.geomspace(hi * 1e-6, hi, grid)
    best, best_r = 0.0, rs[0]
    for i, r in enumerate(rs):
        vol = spec.volume_of_ball(x, float(r))
        if not math.isfinite(vol) or vol < 0.0:
            raise NumericError(f"ball volume at r={r!r} is not finite")
        ratio = float(r) * vol / (vol + tangent_vol(x, 2.0 * float(r)))
        if ratio > best:
            best, best_r = ratio, float(r)
    unbounded = math.isinf(K_cap) and best_r == float(rs[-1])
    return DeltaBound(best, best_r, unbounded)


def universality_radius(inj_x: float, inj_fx: float,
                        modulus_inv: Callable[[float], float]) -> float:
    """min of the domain injectivity radius and the modulus-inverse of the
    codomain injectivity radius; +inf propagates through both branches."""
    if not (inj_x > 0.0 and inj_fx > 0.0):
        raise ValidationError("injectivity radii must be positive")
    return min(inj_x, modulus_inv(inj_fx))
