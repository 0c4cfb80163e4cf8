"""Polynomial utilities: polarization decomposition, monomial counting, and
the reciprocal approximant."""
import itertools
import math

import numpy as np
import pytest

from gdn.approx.polynomials import (
    decompose_polynomial,
    monomial_counts,
    parse_poly_expr,
    poly_derivative,
    poly_eval,
    reciprocal_approx,
)
from gdn.errors import DomainError, ParseError


def enumerate_monomial_slots(n, p):
    """Brute-force (k, c) lattice enumeration behind the monomial counts."""
    M = 0
    distinct = set()
    for k in itertools.product(range(n + 1), repeat=p):
        for c in itertools.product(*(range(n - ki + 1) for ki in k)):
            M += 1
            distinct.add(tuple(n - ci for ci in c))
    M0 = sum(1 for e in distinct if sum(1 for t in e if t > 0) <= 1)
    return M, M0


class TestDecompose:
    def test_univariate_passthrough(self):
        lf = decompose_polynomial({(3,): 2.0, (1,): -1.0}, 3, 1)
        assert len(lf.terms) == 1
        np.testing.assert_array_equal(lf.terms[0][0], [1.0])
        assert lf([0.7]) == pytest.approx(2 * 0.7 ** 3 - 0.7)

    def test_product_polarization(self):
        # x1 x2 = ((x1+x2)^2 - (x1-x2)^2) / 4
        lf = decompose_polynomial({(1, 1): 1.0}, 2, 2)
        assert len(lf.terms) == 2
        for x in ([0.3, -0.8], [2.0, 3.0], [0.0, 5.0]):
            assert lf(x) == pytest.approx(x[0] * x[1], abs=1e-12)

    def test_cubic_mixed_monomial_on_grid(self):
        lf = decompose_polynomial({(2, 1): 1.0}, 3, 2)
        for a in np.linspace(-1, 1, 7):
            for b in np.linspace(-1, 1, 7):
                assert lf([a, b]) == pytest.approx(a * a * b, abs=1e-10)

    def test_all_low_degree_monomials_round_trip(self):
        for p in (1, 2, 3):
            for exps in itertools.product(range(5), repeat=p):
                k = sum(exps)
                if k == 0 or k > 4:
                    continue
                lf = decompose_polynomial({exps: 1.0}, k, p)
                pts = itertools.product(np.linspace(-1, 1, 3), repeat=p)
                for pt in pts:
                    x = np.array(pt)
                    want = float(np.prod([xi ** e for xi, e in zip(x, exps)]))
                    assert lf(x) == pytest.approx(want, abs=1e-8)

    def test_reports_binomial_bound(self):
        lf = decompose_polynomial({(1, 1): 1.0}, 2, 2)
        assert lf.r_bound == math.comb(2 - 1 + 2, 2)


class TestMonomialCounts:
    def test_hand_values(self):
        assert monomial_counts(2, 1) == (6, 3, 12)
        assert monomial_counts(1, 1) == (3, 2, 3)
        assert monomial_counts(2, 2) == (36, 5, 144)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_matches_enumeration(self, n, p):
        M, M0 = enumerate_monomial_slots(n, p)
        counts = monomial_counts(n, p)
        assert counts.M == M
        assert counts.M0 == M0
        assert counts.P1 == n * p * M


class TestReciprocal:
    def test_exact_at_one(self):
        assert reciprocal_approx(1.0, 3) == (1.0, 0.0)

    def test_hand_values(self):
        assert reciprocal_approx(0.5, 1) == (1.875, 0.125)
        r, e = reciprocal_approx(0.5, 2)
        assert r == 1.9921875
        assert e == 0.0078125

    def test_measured_error_matches_closed_form(self, rng):
        for _ in range(300):
            x = float(rng.uniform(0.05, 1.95))
            n_a = int(rng.integers(0, 7))
            r, e = reciprocal_approx(x, n_a)
            assert abs(r - 1.0 / x) == pytest.approx(e, abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            reciprocal_approx(2.0, 1)
        with pytest.raises(DomainError):
            reciprocal_approx(0.0, 1)


class TestParsePoly:
    def test_simple_product(self):
        assert parse_poly_expr("x1*x2", 2) == {(1, 1): 1.0}

    def test_coefficients_signs_powers(self):
        got = parse_poly_expr("2.5*x1^2 - x2 + 3", 2)
        assert got == {(2, 0): 2.5, (0, 1): -1.0, (0, 0): 3.0}

    def test_eval_and_derivative(self):
        c = parse_poly_expr("x1^2*x2", 2)
        assert float(poly_eval(c, [2.0, 3.0])) == 12.0
        d = poly_derivative(c, 0)
        assert float(poly_eval(d, [2.0, 3.0])) == 12.0

    def test_bad_terms(self):
        with pytest.raises(ParseError):
            parse_poly_expr("x1**2", 2)
        with pytest.raises(ParseError):
            parse_poly_expr("x5", 2)
