"""Multidimensional Bernstein operator on the unit cube: evaluation over
the (n+1)^p coefficient lattice, degree selection against a modulus budget,
and conversion to monomial coefficients for network synthesis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Tuple

import numpy as np

from ..errors import DomainError, InfeasibleDegreeError, ValidationError
from .modulus import Modulus

__all__ = [
    "BernsteinModel",
    "bernstein_eval",
    "bernstein_degree_for",
    "bernstein_from_function",
    "bernstein_to_coefficients",
    "bernstein_model_to_dict",
    "bernstein_model_from_dict",
]


@dataclass(frozen=True)
class BernsteinModel:
    """Lattice of target values f(k_1/n, ..., k_p/n) with m outputs.

    ``values`` has shape (n+1, ..., n+1, m): one axis per input dimension in
    lexicographic lattice order, one trailing output axis.
    """

    n: int
    p: int
    values: np.ndarray

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValidationError("Bernstein degree and dimension must be >= 1")
        values = np.asarray(self.values, dtype=float)
        expected = (self.n + 1,) * self.p
        if values.shape[:-1] != expected or values.ndim != self.p + 1:
            raise ValidationError(
                f"values must have shape {expected + ('m',)}, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("lattice values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def m(self) -> int:
        return self.values.shape[-1]

    def __call__(self, x):
        return bernstein_eval(self, x)


from functools import lru_cache


@lru_cache(maxsize=64)
def _binomial_row(n: int) -> np.ndarray:
    row = np.array([math.comb(n, k) for k in range(n + 1)], dtype=float)
    row.setflags(write=False)
    return row


def _basis_weights(n: int, x: float) -> np.ndarray:
    # p_{n,k}(x) = C(n,k) x^k (1-x)^(n-k) for k = 0..n
    ks = np.arange(n + 1)
    return _binomial_row(n) * np.power(x, ks) * np.power(1.0 - x, n - ks)


def bernstein_eval(model: BernsteinModel, x) -> np.ndarray:
    """Exact finite Bernstein sum at a point of the unit cube."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != model.p:
        raise ValidationError(f"point must have length {model.p}, got {x.size}")
    if np.any(x < -1e-12) or np.any(x > 1.0 + 1e-12):
        raise DomainError("Bernstein evaluation requires a point of the unit cube")
    x = np.clip(x, 0.0, 1.0)
    acc = model.values
    for i in range(model.p):
        w = _basis_weights(model.n, float(x[i]))
        acc = np.tensordot(w, acc, axes=(0, 0))
    return acc


def bernstein_from_function(f: Callable[[np.ndarray], np.ndarray],
                            n: int, p: int, m: int) -> BernsteinModel:
    """Sample an oracle on the degree-n lattice of the unit cube."""
    values = np.empty((n + 1,) * p + (m,))
    pt = np.empty(p)
    for idx in product(range(n + 1), repeat=p):
        np.divide(idx, n, out=pt)
        values[idx] = np.asarray(f(pt), dtype=float).ravel()
    return BernsteinModel(n, p, values)


def bernstein_degree_for(eps: float, p: int, m: int, omega: Modulus,
                         cap: int = 10 ** 9) -> int:
    """Smallest degree n with m (1 + p/4) omega(1/sqrt(n)) <= eps.

    Found by doubling then bisection on the monotone predicate; raises when
    no degree below ``cap`` satisfies the budget.
    """
    if eps <= 0.0:
        raise ValidationError("eps must be positive")
    factor = m * (1.0 + p / 4.0)
    fn = omega if callable(omega) else omega.__call__

    def ok(n: int) -> bool:
        return factor * float(fn(1.0 / math.sqrt(n))) <= eps

    if ok(1):
        return 1
    lo, hi = 1, 2
    while not ok(hi):
        lo = hi
        hi *= 2
        if hi > cap:
            raise InfeasibleDegreeError(
                f"no Bernstein degree <= {cap} meets the budget eps={eps!r}", cap
            )
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _bernstein_to_monomial_matrix(n: int) -> np.ndarray:
    # T[d, k]: coefficient of x^d in p_{n,k}(x)
    T = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        cnk = math.comb(n, k)
        for c in range(n - k + 1):
            T[k + c, k] += cnk * math.comb(n - k, c) * (-1.0) ** c
    return T


def bernstein_to_coefficients(model: BernsteinModel,
                              tol: float = 1e-10) -> Dict[Tuple[int, ...], np.ndarray]:
    """Monomial coefficients of the Bernstein polynomial.

    Returns a map exponent-tuple -> m-vector; entries below ``tol`` relative
    to the largest coefficient are dropped.  Intended for the desk-scale
    degrees used in synthesis (binomial growth makes the conversion
    ill-conditioned for large n).
    """
    T = _bernstein_to_monomial_matrix(model.n)
    acc = model.values
    for axis in range(model.p):
        acc = np.moveaxis(np.tensordot(T, np.moveaxis(acc, axis, 0), axes=(1, 0)), 0, axis)
    scale = max(float(np.max(np.abs(acc))), 1.0)
    coeffs: Dict[Tuple[int, ...], np.ndarray] = {}
    for idx in product(range(model.n + 1), repeat=model.p):
        vec = acc[idx]
        if float(np.max(np.abs(vec))) > tol * scale:
            coeffs[idx] = np.asarray(vec, dtype=float).copy()
    return coeffs


def bernstein_model_to_dict(model: BernsteinModel) -> dict:
    return {
        "n": model.n,
        "p": model.p,
        "m": model.m,
        "values": model.values.reshape(-1, model.m).tolist(),
    }


def bernstein_model_from_dict(d: dict) -> BernsteinModel:
    try:
        n, p, m = int(d["n"]), int(d["p"]), int(d["m"])
        flat = np.array(d["values"], dtype=float)
    except (KeyError, TypeError) as e:
        raise ValidationError(f"malformed Bernstein dictionary: {e}") from e
    return BernsteinModel(n, p, flat.reshape((n + 1,) * p + (m,)))
