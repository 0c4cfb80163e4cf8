"""Moduli of continuity: empirical estimation, generalized inversion, least
concave majorants, the averaged (continuous) modulus, and the sup-form
modulus-preserving extension of sampled functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ValidationError

__all__ = [
    "ModulusEstimate",
    "AnalyticModulus",
    "LipschitzModulus",
    "empirical_modulus",
    "modulus_from_samples",
    "modulus_inverse",
    "concave_majorant",
    "smooth_modulus",
    "smooth_modulus_inverse",
    "mcshane_extend",
]


@dataclass(frozen=True)
class ModulusEstimate:
    """Tabulated nondecreasing modulus with omega(0) = 0.

    ``interp`` selects evaluation semantics: ``"step"`` is the
    right-continuous running-max estimate (a lower bound of the true
    modulus by construction), ``"linear"`` interpolates between knots
    (used by concave majorants).  Beyond the last knot the value is held
    constant.
    """

    knots: np.ndarray
    values: np.ndarray
    kind: str = "empirical"
    interp: str = "step"

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float).ravel()
        values = np.asarray(self.values, dtype=float).ravel()
        if knots.size == 0 or knots.size != values.size:
            raise ValidationError("knots and values must be non-empty and aligned")
        if knots[0] != 0.0 or values[0] != 0.0:
            raise ValidationError("a modulus estimate must start at (0, 0)")
        if np.any(np.diff(knots) <= 0.0):
            raise ValidationError("knots must be strictly increasing")
        if np.any(np.diff(values) < 0.0):
            raise ValidationError("modulus values must be nondecreasing")
        if not (np.all(np.isfinite(knots)) and np.all(np.isfinite(values))):
            raise ValidationError("modulus data must be finite")
        if self.interp not in ("step", "linear"):
            raise ValidationError(f"unknown interpolation {self.interp!r}")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    def __call__(self, t: float) -> float:
        if t < 0.0:
            raise ValidationError("modulus argument must be nonnegative")
        k, v = self.knots, self.values
        if t >= k[-1]:
            return float(v[-1])
        if self.interp == "step":
            i = int(np.searchsorted(k, t, side="right")) - 1
            return float(v[i])
        i = int(np.searchsorted(k, t, side="right")) - 1
        if k[i] == t:
            return float(v[i])
        w = (t - k[i]) / (k[i + 1] - k[i])
        return float(v[i] + w * (v[i + 1] - v[i]))


@dataclass(frozen=True)
class AnalyticModulus:
    """Closed-form modulus; supply ``inverse`` when it is known exactly."""

    fn: Callable[[float], float]
    inverse: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __call__(self, t: float) -> float:
        return float(self.fn(t))


def LipschitzModulus(L: float) -> AnalyticModulus:
    """omega(t) = L t with the exact generalized inverse eps / L."""
    if not (L >= 0.0):
        raise ValidationError(f"Lipschitz constant must be nonnegative, got {L!r}")
    if L == 0.0:
        return AnalyticModulus(lambda t: 0.0, lambda eps: math.inf)
    return AnalyticModulus(lambda t: L * t, lambda eps: eps / L)


Modulus = Union[ModulusEstimate, AnalyticModulus, Callable[[float], float]]


def empirical_modulus(pairs: Sequence[Tuple[float, float]]) -> ModulusEstimate:
    """Running-max estimate from (input distance, output distance) pairs.

    The estimate is piecewise constant and right-continuous, and bounds the
    true modulus from below by construction.
    """
    if not len(pairs):
        raise ValidationError("empirical modulus needs at least one pair")
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError("pairs must be (input distance, output distance) tuples")
    if np.any(arr < 0.0):
        raise ValidationError("distances must be nonnegative")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("distances must be finite")
    order = np.argsort(arr[:, 0], kind="stable")
    arr = arr[order]
    knots: List[float] = [0.0]
    values: List[float] = [0.0]
    running = 0.0
    for din, dout in arr:
        running = max(running, float(dout))
        if din == knots[-1]:
            if running > values[-1]:
                if din == 0.0:
                    raise ValidationError(
                        "pairs at zero input distance must have zero output distance"
                    )
                values[-1] = running
        else:
            knots.append(float(din))
            values.append(running)
    return ModulusEstimate(np.array(knots), np.array(values), kind="empirical")


def modulus_from_samples(f: Callable[[np.ndarray], np.ndarray],
                         xs: Sequence[np.ndarray]) -> ModulusEstimate:
    """Empirical modulus of ``f`` over all pairs from the Euclidean sample
    ``xs`` (O(n^2) pairs; intended for desk-scale grids)."""
    xs = [np.asarray(x, dtype=float).ravel() for x in xs]
    ys = [np.asarray(f(x), dtype=float).ravel() for x in xs]
    pairs = []
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            pairs.append((float(np.linalg.norm(xs[i] - xs[j])),
                          float(np.linalg.norm(ys[i] - ys[j]))))
    return empirical_modulus(pairs)


_T_MAX = 1e18


def modulus_inverse(omega: Modulus, eps: float) -> float:
    """Generalized inverse sup{t : omega(t) <= eps}.

    Exact for tabulated estimates; bisection to 1e-12 relative accuracy for
    callables; +inf when omega never exceeds eps.
    """
    if eps < 0.0:
        raise ValidationError("eps must be nonnegative")
    if math.isinf(eps):
        return math.inf
    if isinstance(omega, AnalyticModulus) and omega.inverse is not None:
        return float(omega.inverse(eps))
    if isinstance(omega, ModulusEstimate):
        v = omega.values
        if v[-1] <= eps:
            return math.inf
        i = int(np.searchsorted(v, eps, side="right"))
        if omega.interp == "step":
            return float(omega.knots[i])
        k = omega.knots
        return float(k[i - 1] + (eps - v[i - 1]) * (k[i] - k[i - 1]) / (v[i] - v[i - 1]))
    fn = omega
    if fn(1e-300) > eps:
        # the sublevel set collapses to {0}
        return 0.0
    lo, hi = 0.0, 1.0
    while fn(hi) <= eps:
        lo = hi
        hi *= 2.0
        if hi > _T_MAX:
            return math.inf
    while hi - lo > 1e-12 * max(hi, 1.0):
        mid = 0.5 * (lo + hi)
        if fn(mid) <= eps:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def concave_majorant(omega: ModulusEstimate) -> ModulusEstimate:
    """Least concave majorant over the knot set: the upper hull of the graph
    points augmented with the origin, re-sampled at the original knots."""
    pts = list(zip(omega.knots.tolist(), omega.values.tolist()))
    hull: List[Tuple[float, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) >= 0.0:
                hull.pop()
            else:
                break
        hull.append(p)
    hx = np.array([h[0] for h in hull])
    hy = np.array([h[1] for h in hull])
    vals = np.interp(omega.knots, hx, hy)
    vals = np.maximum.accumulate(np.maximum(vals, omega.values * 0.0))
    return ModulusEstimate(omega.knots.copy(), vals, kind=omega.kind, interp="linear")


def smooth_modulus(omega: Modulus, t: float, panels: int = 64) -> float:
    """Averaged modulus (1/t') * integral_{t'}^{2t'} omega(s) ds at
    t' = t (1 + 1e-9), by the trapezoid rule.

    This is the literal defining average; note that for omega(t) = L t it
    evaluates to 1.5 L t, not L t.
    """
    if t < 0.0:
        raise ValidationError("argument must be nonnegative")
    if t == 0.0:
        return 0.0
    tt = t * (1.0 + 1e-9)
    ss = np.linspace(tt, 2.0 * tt, panels + 1)
    fn = omega if callable(omega) else omega.__call__
    ys = np.array([float(fn(s)) for s in ss])
    integral = float(np.trapezoid(ys, ss))
    return integral / tt


def smooth_modulus_inverse(omega: Modulus, eps: float) -> float:
    """Generalized inverse of the averaged modulus (bisection)."""
    return modulus_inverse(lambda t: smooth_modulus(omega, t), eps)


def mcshane_extend(samples: Sequence[Tuple[np.ndarray, float]],
                   omega_c: ModulusEstimate, x,
                   variant: str = "plain") -> float:
    """Sup-form modulus-controlled extension of sampled scalar data.

    plain:  F(x) = sup_y { f(y) - omega_c(|x - y|) }
    halved: half that value.

    Only the plain variant interpolates the samples (the halved one returns
    f/2 on the sample set); it is the default.  With a concave majorant
    dominating the sampled variation, the plain extension inherits the
    majorant as a modulus on sampled pairs.
    """
    if not len(samples):
        raise ValidationError("extension needs at least one sample")
    if variant not in ("plain", "halved"):
        raise ValidationError(f"unknown variant {variant!r}")
    x = np.asarray(x, dtype=float).ravel()
    best = -math.inf
    for y, fy in samples:
        y = np.asarray(y, dtype=float).ravel()
        best = max(best, float(fy) - omega_c(float(np.linalg.norm(x - y))))
    return 0.5 * best if variant == "halved" else best
