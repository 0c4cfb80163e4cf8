"""Bernstein operator: evaluation oracles, degree selection, and the
classical error bound."""
import math

import numpy as np
import pytest

from gdn.approx.bernstein import (
    bernstein_degree_for,
    bernstein_eval,
    bernstein_from_function,
    bernstein_model_from_dict,
    bernstein_model_to_dict,
    bernstein_to_coefficients,
)
from gdn.approx.modulus import AnalyticModulus, LipschitzModulus
from gdn.errors import DomainError, InfeasibleDegreeError


def brute_bernstein_1d(f, n, x):
    return sum(f(k / n) * math.comb(n, k) * x ** k * (1 - x) ** (n - k)
               for k in range(n + 1))


class TestBernsteinEval:
    def test_partition_of_unity(self, rng):
        model = bernstein_from_function(lambda x: np.array([4.2]), 5, 2, 1)
        for _ in range(20):
            x = rng.random(2)
            assert bernstein_eval(model, x)[0] == pytest.approx(4.2, abs=1e-12)

    def test_reproduces_linear(self):
        model = bernstein_from_function(lambda x: np.array([x[0]]), 3, 1, 1)
        assert bernstein_eval(model, [0.5])[0] == pytest.approx(0.5, abs=1e-15)

    def test_square_hand_value(self):
        # B_n(x^2) = x^2 + x(1-x)/n; at n=2, x=1/2: 0.25 + 0.125 = 0.375
        model = bernstein_from_function(lambda x: np.array([x[0] ** 2]), 2, 1, 1)
        assert bernstein_eval(model, [0.5])[0] == pytest.approx(0.375, abs=1e-15)

    def test_matches_brute_force_sum(self, rng):
        f = lambda t: math.sin(3 * t)
        model = bernstein_from_function(lambda x: np.array([f(x[0])]), 7, 1, 1)
        for _ in range(25):
            x = float(rng.random())
            assert bernstein_eval(model, [x])[0] == pytest.approx(
                brute_bernstein_1d(f, 7, x), abs=1e-12)

    def test_outside_cube_rejected(self):
        model = bernstein_from_function(lambda x: np.array([0.0]), 2, 1, 1)
        with pytest.raises(DomainError):
            bernstein_eval(model, [1.5])


class TestDegreeFor:
    def test_lipschitz_hand_values(self):
        assert bernstein_degree_for(0.25, 1, 1, LipschitzModulus(1.0)) == 25
        assert bernstein_degree_for(0.25, 1, 2, LipschitzModulus(1.0)) == 100

    def test_zero_modulus(self):
        assert bernstein_degree_for(0.25, 3, 2, LipschitzModulus(0.0)) == 1

    def test_minimality(self):
        n = bernstein_degree_for(0.25, 1, 1, LipschitzModulus(1.0))
        factor = 1.25
        assert factor / math.sqrt(n) <= 0.25
        assert factor / math.sqrt(n - 1) > 0.25

    def test_cap_raises(self):
        stuck = AnalyticModulus(lambda t: 1.0 if t > 0 else 0.0)
        with pytest.raises(InfeasibleDegreeError):
            bernstein_degree_for(0.5, 1, 1, stuck, cap=10 ** 6)


class TestBernsteinBound:
    @pytest.mark.parametrize("n", [4, 16, 64])
    def test_one_dimensional_bound(self, n):
        f = lambda x: abs(x[0] - 0.5)
        model = bernstein_from_function(lambda x: np.array([f(x)]), n, 1, 1)
        grid = np.linspace(0, 1, 301)
        err = max(abs(bernstein_eval(model, [x])[0] - f([x])) for x in grid)
        assert err <= (1 + 0.25) / math.sqrt(n)

    def test_two_dimensional_bound(self):
        n = 16
        f = lambda x: abs(x[0] - 0.5)
        model = bernstein_from_function(lambda x: np.array([f(x)]), n, 2, 1)
        pts = [np.array([a, b]) for a in np.linspace(0, 1, 18)
               for b in np.linspace(0, 1, 18)]
        err = max(abs(bernstein_eval(model, x)[0] - f(x)) for x in pts)
        assert err <= 1.5 / math.sqrt(n)

    @pytest.mark.parametrize("n", [4, 16, 64, 256])
    def test_bound_for_oscillating_surrogates(self, n):
        # x^2 and a sin-like cubic, both with Lipschitz majorants of the
        # true modulus on [0, 1]
        targets = [
            (lambda t: t * t, 2.0),
            (lambda t: t ** 3 - t ** 2 + 0.5 * t, 1.5),
        ]
        grid = np.linspace(0.0, 1.0, 401)
        for f, L in targets:
            model = bernstein_from_function(lambda x: np.array([f(x[0])]), n, 1, 1)
            err = max(abs(bernstein_eval(model, [x])[0] - f(x)) for x in grid)
            assert err <= 1.25 * L / math.sqrt(n)


class TestCoefficients:
    def test_product_is_recovered_exactly(self):
        model = bernstein_from_function(lambda x: np.array([x[0] * x[1]]), 2, 2, 1)
        coeffs = bernstein_to_coefficients(model)
        assert set(coeffs) == {(1, 1)}
        assert coeffs[(1, 1)][0] == pytest.approx(1.0, abs=1e-12)

    def test_coefficients_evaluate_like_the_operator(self, rng):
        f = lambda x: np.array([x[0] ** 2 - 0.3 * x[0] + 0.1])
        model = bernstein_from_function(f, 4, 1, 1)
        coeffs = bernstein_to_coefficients(model)
        for _ in range(20):
            x = rng.random(1)
            val = sum(c[0] * x[0] ** e[0] for e, c in coeffs.items())
            assert val == pytest.approx(bernstein_eval(model, x)[0], abs=1e-10)


class TestSerialization:
    def test_round_trip(self, rng):
        model = bernstein_from_function(
            lambda x: np.array([x[0], x[0] ** 2]), 3, 1, 2)
        d = bernstein_model_to_dict(model)
        assert d["n"] == 3 and d["p"] == 1 and d["m"] == 2
        back = bernstein_model_from_dict(d)
        np.testing.assert_array_equal(back.values, model.values)
