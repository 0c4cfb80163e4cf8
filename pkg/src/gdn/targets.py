"""Built-in target functions for the command-line experiments.

Each target is a closed-form map between zoo manifolds with a known
evaluation oracle, so compiled models can be audited against ground truth:

* ``rotation[:angle]`` - sphere-to-sphere rotation about the axis through
  the base point (default angle pi/4).
* ``mobius-shift[:t]`` - hyperbolic translation x -> a (+) x with
  a = t * e1 (default t = 0.3 / sqrt(c)).
* ``spd-congruence[:seed]`` - A -> X^T A X for a seeded random orthogonal X.
* ``poly:EXPR`` - Euclidean polynomial target, e.g. ``poly:x1*x2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .approx.polynomials import parse_poly_expr, poly_eval
from .errors import ParseError, ValidationError
from .manifolds.core import ManifoldSpec
from .manifolds.sym import frob_unvec, frob_vec
from .manifolds.zoo import check_point, mobius_add

__all__ = ["Target", "resolve_target"]


@dataclass(frozen=True)
class Target:
    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    out_dim: int


def _rotation_about_axis(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix in R^3 about a unit axis."""
    K = np.array([
        [0.0, -axis[2], axis[1]],
        [axis[2], 0.0, -axis[0]],
        [-axis[1], axis[0], 0.0],
    ])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def resolve_target(name: str, domain: ManifoldSpec, base_x,
                   seed: int = 0) -> Target:
    """Build a target oracle acting on points of ``domain``."""
    parts = name.split(":", 1)
    kind = parts[0]
    arg: Optional[str] = parts[1] if len(parts) > 1 else None

    if kind == "rotation":
        if domain.family != "sphere" or domain.dim != 2:
            raise ValidationError("rotation target requires domain sphere:2")
        angle = float(arg) if arg else math.pi / 4.0
        base = check_point(domain, base_x)
        R = _rotation_about_axis(base, angle)
        return Target(name, lambda x: R @ np.asarray(x, dtype=float), 3)

    if kind == "mobius-shift":
        if domain.family != "poincare":
            raise ValidationError("mobius-shift target requires a poincare domain")
        c = domain.param
        t = float(arg) if arg else 0.3 / math.sqrt(c)
        a = np.zeros(domain.point_dim)
        a[0] = t
        if c * float(a @ a) >= 1.0:
            raise ValidationError("mobius shift lies outside the ball")
        return Target(name, lambda x: mobius_add(a, np.asarray(x, dtype=float), c),
                      domain.point_dim)

    if kind == "spd-congruence":
        if domain.family != "spd":
            raise ValidationError("spd-congruence target requires an spd domain")
        n = int(domain.param)
        rng = np.random.default_rng(int(arg) if arg else seed)
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)))

        def congruence(x: np.ndarray) -> np.ndarray:
            A = frob_unvec(np.asarray(x, dtype=float))
            return frob_vec(Q.T @ A @ Q)

        return Target(name, congruence, domain.point_dim)

    if kind == "poly":
        if domain.family != "euclidean":
            raise ValidationError("poly targets require a euclidean domain")
        if not arg:
            raise ParseError("poly target needs an expression, e.g. poly:x1*x2")
        exprs = arg.split(",")
        polys = [parse_poly_expr(e, domain.dim) for e in exprs]

        def evaluate(x: np.ndarray) -> np.ndarray:
            return np.array([float(poly_eval(c, x)) for c in polys])

        return Target(name, evaluate, len(polys))

    raise ParseError(
        f"unknown target {name!r}; expected rotation, mobius-shift, "
        "spd-congruence, or poly:EXPR"
    )
