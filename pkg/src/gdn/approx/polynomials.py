"""Multivariate polynomial utilities: sparse exponent-dict polynomials, the
polarization-based decomposition into univariate polynomials of linear
forms, monomial/multiplication counting, and the squared-difference
reciprocal approximant.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, NamedTuple, Tuple

import numpy as np

from ..errors import DomainError, NumericError, ParseError, ValidationError

__all__ = [
    "poly_eval",
    "poly_derivative",
    "poly_total_degree",
    "parse_poly_expr",
    "LinearFormPoly",
    "decompose_polynomial",
    "MonomialCounts",
    "monomial_counts",
    "reciprocal_approx",
]

Coeffs = Dict[Tuple[int, ...], float]


def poly_eval(coeffs: Dict[Tuple[int, ...], object], x) -> np.ndarray:
    """Evaluate a sparse exponent-dict polynomial; coefficients may be
    scalars or vectors (all of one shape)."""
    x = np.asarray(x, dtype=float).ravel()
    total = None
    for exps, c in coeffs.items():
        mono = 1.0
        for xi, e in zip(x, exps):
            if e:
                mono *= xi ** e
        term = np.asarray(c, dtype=float) * mono
        total = term if total is None else total + term
    if total is None:
        return np.float64(0.0)
    return total


def poly_derivative(coeffs: Dict[Tuple[int, ...], object],
                    axis: int) -> Dict[Tuple[int, ...], object]:
    """Partial derivative along one axis."""
    out: Dict[Tuple[int, ...], object] = {}
    for exps, c in coeffs.items():
        e = exps[axis]
        if e == 0:
            continue
        new = list(exps)
        new[axis] = e - 1
        key = tuple(new)
        add = np.asarray(c, dtype=float) * e
        out[key] = out[key] + add if key in out else add
    return out


def poly_total_degree(coeffs: Coeffs) -> int:
    return max((sum(e) for e in coeffs), default=0)


_TERM_RE = re.compile(r"^\s*([0-9.eE]+)?\s*\*?\s*((?:x\d+(?:\^\d+)?\s*\*?\s*)*)$")
_VAR_RE = re.compile(r"x(\d+)(?:\^(\d+))?")


def parse_poly_expr(expr: str, dim: int) -> Coeffs:
    """Parse expressions like ``"x1*x2 + 0.5*x1^2 - 2"`` into an exponent
    dict over ``dim`` variables (variables are 1-indexed)."""
    s = expr.replace("-", "+-").strip()
    if s.startswith("+"):
        s = s[1:]
    coeffs: Coeffs = {}
    for raw in s.split("+"):
        term = raw.strip()
        if not term:
            continue
        sign = 1.0
        if term.startswith("-"):
            sign = -1.0
            term = term[1:].strip()
        m = _TERM_RE.match(term)
        if m is None:
            raise ParseError(f"cannot parse polynomial term {raw.strip()!r}")
        coef = sign * (float(m.group(1)) if m.group(1) else 1.0)
        exps = [0] * dim
        for vm in _VAR_RE.finditer(m.group(2) or ""):
            i = int(vm.group(1))
            if not (1 <= i <= dim):
                raise ParseError(f"variable x{i} outside dimension {dim}")
            exps[i - 1] += int(vm.group(2)) if vm.group(2) else 1
        key = tuple(exps)
        coeffs[key] = coeffs.get(key, 0.0) + coef
    return {k: v for k, v in coeffs.items() if v != 0.0}


@dataclass(frozen=True)
class LinearFormPoly:
    """Sum of univariate polynomials of linear forms:
    h(x) = sum_i p_i(<a_i, x>), with p_i given by its coefficient vector
    (constant term first)."""

    terms: Tuple[Tuple[np.ndarray, np.ndarray], ...]
    dim: int
    degree: int
    r_bound: int

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float).ravel()
        total = 0.0
        for a, b in self.terms:
            z = float(a @ x)
            total += float(np.polyval(b[::-1], z))
        return total

    @property
    def synthesis_width(self) -> int:
        """Hidden-neuron budget: one neuron per positive degree per term."""
        w = 0
        for _a, b in self.terms:
            nz = np.nonzero(np.abs(b) > 0.0)[0]
            w += int(nz[-1]) if nz.size else 0
        return w


def _canonical_direction(a: np.ndarray) -> Tuple[Tuple[int, ...], int]:
    nz = np.nonzero(a)[0]
    if nz.size and a[nz[0]] < 0:
        return tuple(int(t) for t in -a), -1
    return tuple(int(t) for t in a), 1


def decompose_polynomial(coeffs: Coeffs, degree: int, dim: int,
                         check_tol: float = 1e-8) -> LinearFormPoly:
    """Rewrite a multivariate polynomial as a sum of univariate polynomials
    of linear forms.

    Mixed monomials go through the polarization identity
    y_1...y_d = 2^{-d} (d!)^{-1} sum_{e in {+-1}^d} (prod e) (sum_j e_j y_j)^d,
    with +-a directions merged; pure powers and affine terms map directly.
    Sign patterns are aggregated per coordinate (a monomial x^alpha needs
    only prod_i (alpha_i + 1) distinct directions, not 2^degree patterns).
    The result is verified against the source on a (degree+1)^dim grid of
    [-1, 1]^dim and reported alongside the binomial bound
    r = C(dim - 1 + degree, degree) on the number of forms.
    """
    if poly_total_degree(coeffs) > degree:
        raise ValidationError("declared degree is below the polynomial's total degree")
    acc: Dict[Tuple[int, ...], np.ndarray] = {}
    constant = 0.0

    def add(direction: Tuple[int, ...], d: int, c: float):
        if c == 0.0:
            return
        if direction not in acc:
            acc[direction] = np.zeros(degree + 1)
        acc[direction][d] += c

    for exps, coef in coeffs.items():
        d = sum(exps)
        if d == 0:
            constant += coef
            continue
        support = [i for i, e in enumerate(exps) if e]
        if len(support) == 1:
            a = np.zeros(dim, dtype=int)
            a[support[0]] = 1
            add(tuple(int(t) for t in a), d, coef)
            continue
        # polarization, aggregated: choosing j_i of the alpha_i copies of
        # coordinate i to carry +1 gives direction component 2 j_i - alpha_i
        # with multiplicity C(alpha_i, j_i) and sign (-1)^{alpha_i - j_i}
        norm = coef / (2.0 ** d * math.factorial(d))
        alphas = [exps[i] for i in support]
        for js in product(*(range(a_i + 1) for a_i in alphas)):
            a = np.zeros(dim, dtype=int)
            weight = 1.0
            for i, a_i, j_i in zip(support, alphas, js):
                a[i] = 2 * j_i - a_i
                weight *= math.comb(a_i, j_i) * (-1.0) ** (a_i - j_i)
            if not np.any(a):
                continue
            key, flip = _canonical_direction(a)
            add(key, d, norm * weight * (flip ** d))

    terms = []
    for key, b in sorted(acc.items()):
        if np.any(np.abs(b) > 0.0):
            terms.append((np.array(key, dtype=float), b.copy()))
    if constant != 0.0:
        if terms:
            terms[0][1][0] += constant
        else:
            a = np.zeros(dim)
            a[0] = 1.0
            b = np.zeros(degree + 1)
            b[0] = constant
            terms.append((a, b))

    r_bound = math.comb(dim - 1 + degree, degree)
    result = LinearFormPoly(tuple(terms), dim, degree, r_bound)

    # round-trip audit on the test grid
    axes = [np.linspace(-1.0, 1.0, degree + 1)] * dim
    scale = max(1.0, max((abs(float(np.asarray(c))) for c in coeffs.values()), default=1.0))
    for pt in product(*axes):
        x = np.array(pt)
        want = float(poly_eval(coeffs, x))
        got = result(x)
        if abs(want - got) > check_tol * scale:
            raise NumericError(
                f"polarization decomposition failed audit at {x}: {got} vs {want}"
            )
    return result


class MonomialCounts(NamedTuple):
    M: int
    M0: int
    P1: int


def monomial_counts(n: int, p: int) -> MonomialCounts:
    """Monomial and multiplication counts for the degree-n Bernstein
    expansion in dimension p.

    M  = ((n/2 + 1)(n + 1))^p lattice monomial slots,
    M0 = n p + 1 monomials with at most one active coordinate,
    P1 = n p M leading multiplication count.
    """
    if n < 1 or p < 1:
        raise ValidationError("n and p must be >= 1")
    slot = (n + 1) * (n + 2) // 2
    M = slot ** p
    return MonomialCounts(M, n * p + 1, n * p * M)


def reciprocal_approx(x: float, n_a: int) -> Tuple[float, float]:
    """Bounded-width reciprocal approximant
    r(x) = (2 - x) prod_{i=1..n_a} (1 + (1 - x)^(2^i)) with its closed-form
    error |(1 - x)^(2^(n_a+1)) / x|."""
    if not (0.0 < x < 2.0):
        raise DomainError(f"reciprocal approximant requires x in (0, 2), got {x!r}")
    if n_a < 0:
        raise ValidationError("n_a must be nonnegative")
    u = 1.0 - x
    r = 2.0 - x
    power = u * u
    for _ in range(n_a):
        r *= 1.0 + power
        power = power * power
    # after the loop, power == (1-x)^(2^(n_a+1))
    return r, abs(power / x)
