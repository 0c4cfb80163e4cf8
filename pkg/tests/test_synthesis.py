"""Finite-difference synthesis: derivative stencils, shallow compilation of
polynomials and functions, and Riemann smoothing of continuous
activations."""
import math

import numpy as np
import pytest

from gdn.approx.bernstein import bernstein_from_function
from gdn.approx.modulus import LipschitzModulus
from gdn.approx.polynomials import decompose_polynomial
from gdn.approx.synthesis import (
    compile_function_to_shallow,
    compile_poly_to_shallow,
    finite_diff_derivative,
    merge_shallow,
    riemann_smooth_activation,
    select_theta0,
)
from gdn.errors import UnsupportedError, ValidationError
from gdn.network import get_activation, width

EXP = get_activation("exp")
RELU = get_activation("relu")


class TestFiniteDiff:
    def test_order_zero_is_pointwise(self):
        assert finite_diff_derivative(EXP, 0, 5.0, 0.7, 1e-3) \
            == pytest.approx(math.exp(-0.7))

    def test_exp_derivative_oracle(self):
        # d^k/dw^k exp(wz)|_0 = z^k
        assert finite_diff_derivative(EXP, 2, 2.0, 0.0, 1e-4) \
            == pytest.approx(4.0, abs=1e-3)
        assert finite_diff_derivative(EXP, 1, 3.0, 0.0, 1e-5) \
            == pytest.approx(3.0, abs=1e-4)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_halving_h_halves_the_error(self, k):
        # first-order convergence: halving h should roughly halve the error
        # (h large enough that truncation dominates stencil roundoff)
        z, h = 1.3, 1e-2
        truth = z ** k  #  z^k exp(0)
        e1 = abs(finite_diff_derivative(EXP, k, z, 0.0, h) - truth)
        e2 = abs(finite_diff_derivative(EXP, k, z, 0.0, h / 2.0) - truth)
        assert 0.35 <= e2 / e1 <= 0.65


class TestSelectTheta0:
    def test_exp_keeps_registered_offset(self):
        assert select_theta0(EXP, 6) == 0.0

    def test_sigmoid_moves_off_zero(self):
        # sigma''(0) = 0 for the sigmoid, so theta0 = 0 must be rejected
        sig = get_activation("sigmoid")
        theta = select_theta0(sig, 3)
        assert theta != 0.0
        for k in range(1, 4):
            assert abs(finite_diff_derivative(sig, k, 1.0, theta, 1e-2)) > 1e-6


class TestCompilePoly:
    def test_constant_is_bias_only(self):
        lf = decompose_polynomial({(0, 0): 3.5}, 1, 2)
        res = compile_poly_to_shallow(lf, EXP, 0.0, 1e-3)
        assert width(res.net) == 0
        assert res.net([0.3, -0.8])[0] == pytest.approx(3.5)

    def test_square_width_two_and_error(self):
        lf = decompose_polynomial({(2,): 1.0}, 2, 1)
        res = compile_poly_to_shallow(lf, EXP, 0.0, 1e-3)
        assert res.net.layers[0].out_dim == 2
        grid = np.linspace(-1, 1, 201)
        err = max(abs(res.net([z])[0] - z * z) for z in grid)
        assert err <= 5e-3

    def test_product_width_four(self):
        lf = decompose_polynomial({(1, 1): 1.0}, 2, 2)
        res = compile_poly_to_shallow(lf, EXP, 0.0, 1e-3)
        assert res.net.layers[0].out_dim == 4

    def test_error_scales_linearly_in_h(self):
        lf = decompose_polynomial({(3,): 1.0}, 3, 1)
        grid = np.linspace(-1, 1, 101)
        errs = []
        for h in (2e-3, 1e-3, 5e-4):
            net = compile_poly_to_shallow(lf, EXP, 0.0, h).net
            errs.append(max(abs(net([z])[0] - z ** 3) for z in grid))
        assert errs[0] > errs[1] > errs[2]
        assert errs[0] / errs[2] == pytest.approx(4.0, rel=0.5)

    def test_rejects_nonsmooth_activation(self):
        lf = decompose_polynomial({(1,): 1.0}, 1, 1)
        with pytest.raises(UnsupportedError):
            compile_poly_to_shallow(lf, RELU, 0.0, 1e-3)


class TestCompileFunction:
    def test_constant_target(self):
        res = compile_function_to_shallow(lambda x: np.array([2.0]), 1, 1, 0.1, EXP)
        assert res.audit_error <= 1e-9
        assert width(res.net) == 0

    def test_identity_on_unit_interval(self):
        res = compile_function_to_shallow(lambda x: np.array([x[0]]), 1, 1, 0.1, EXP,
                                          omega=LipschitzModulus(1.0))
        assert res.audit_error <= 0.1

    def test_product_target(self):
        res = compile_function_to_shallow(lambda x: np.array([x[0] * x[1]]),
                                          2, 1, 0.1, EXP)
        assert res.audit_error <= 0.1
        assert res.degree == 1

    def test_two_outputs(self):
        res = compile_function_to_shallow(
            lambda x: np.array([x[0], x[0] ** 2]), 1, 2, 0.1, EXP)
        assert res.audit_error <= 0.1
        assert res.net.out_dim == 2

    def test_bernstein_model_input(self):
        model = bernstein_from_function(lambda x: np.array([x[0] ** 2]), 2, 1, 1)
        res = compile_function_to_shallow(model, 1, 1, 0.05, EXP)
        assert res.degree == 2
        assert res.audit_error <= 0.05

    def test_genuine_high_degree_synthesis(self):
        # a sine target forces Bernstein degree > 1 and a deep stencil
        res = compile_function_to_shallow(lambda x: np.array([np.sin(3.0 * x[0])]),
                                          1, 1, 0.3, EXP)
        assert res.degree > 1
        assert res.audit_error <= 0.3

    def test_infeasible_budgets_fail_fast(self):
        import time
        from gdn.errors import InfeasibleDegreeError
        f = lambda x: np.array([np.sin(3.0 * x[0]) * np.cos(2.0 * x[1])])
        t0 = time.perf_counter()
        with pytest.raises(InfeasibleDegreeError):
            compile_function_to_shallow(f, 2, 1, 0.1, EXP)
        assert time.perf_counter() - t0 < 30.0


class TestMergeShallow:
    def test_outputs_stack(self, rng):
        lf1 = decompose_polynomial({(1,): 1.0}, 1, 1)
        lf2 = decompose_polynomial({(2,): 1.0}, 2, 1)
        n1 = compile_poly_to_shallow(lf1, EXP, 0.0, 1e-3).net
        n2 = compile_poly_to_shallow(lf2, EXP, 0.0, 1e-3).net
        merged = merge_shallow([n1, n2])
        for _ in range(10):
            x = rng.uniform(-1, 1, 1)
            np.testing.assert_allclose(merged(x), [n1(x)[0], n2(x)[0]], atol=1e-12)


class TestRiemannSmoothing:
    def test_linear_activation_exact_to_quadrature(self):
        # locally linear sigma: Riemann sum agrees with the convolution
        lin = get_activation("relu")  # linear on [1, inf)
        val, bound = riemann_smooth_activation(lin, (-0.5, 0.5), 64, 5.0)
        # oracle: 10x-finer quadrature of the mollified activation
        oracle, _ = riemann_smooth_activation(lin, (-0.5, 0.5), 640, 5.0)
        assert val == pytest.approx(oracle, abs=1e-8)

    def test_bound_halves_with_doubled_l(self):
        _, b1 = riemann_smooth_activation(RELU, (-1.0, 1.0), 50, 0.0)
        _, b2 = riemann_smooth_activation(RELU, (-1.0, 1.0), 100, 0.0)
        assert b2 == pytest.approx(b1 / 2.0, rel=0.05)

    def test_relu_within_modulus_bound_of_oracle(self):
        val, bound = riemann_smooth_activation(RELU, (-1.0, 1.0), 100, 0.0)
        assert bound == pytest.approx(0.02, rel=0.05)
        oracle, _ = riemann_smooth_activation(RELU, (-1.0, 1.0), 1000, 0.0)
        assert abs(val - oracle) <= bound

    def test_l_validation(self):
        with pytest.raises(ValidationError):
            riemann_smooth_activation(RELU, (-1.0, 1.0), 0, 0.0)
