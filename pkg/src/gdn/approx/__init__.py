from .bernstein import (
    BernsteinModel,
    bernstein_degree_for,
    bernstein_eval,
    bernstein_from_function,
    bernstein_model_from_dict,
    bernstein_model_to_dict,
    bernstein_to_coefficients,
)
from .certify import EfficiencyCertificate, certify_efficient
from .estimates import (
    DepthEstimate,
    EfficientComplexity,
    depth_estimate,
    efficient_complexity,
)
from .modulus import (
    AnalyticModulus,
    LipschitzModulus,
    ModulusEstimate,
    concave_majorant,
    empirical_modulus,
    mcshane_extend,
    modulus_from_samples,
    modulus_inverse,
    smooth_modulus,
    smooth_modulus_inverse,
)
from .polynomials import (
    LinearFormPoly,
    MonomialCounts,
    decompose_polynomial,
    monomial_counts,
    parse_poly_expr,
    poly_derivative,
    poly_eval,
    poly_total_degree,
    reciprocal_approx,
)
from .synthesis import (
    CompiledPoly,
    CompileResult,
    compile_function_to_shallow,
    compile_poly_to_shallow,
    finite_diff_derivative,
    merge_shallow,
    riemann_smooth_activation,
    select_theta0,
)
from .verticalize import VerticalizeResult, split_outputs, verticalize

__all__ = [
    "BernsteinModel",
    "bernstein_degree_for",
    "bernstein_eval",
    "bernstein_from_function",
    "bernstein_model_from_dict",
    "bernstein_model_to_dict",
    "bernstein_to_coefficients",
    "EfficiencyCertificate",
    "certify_efficient",
    "DepthEstimate",
    "EfficientComplexity",
    "depth_estimate",
    "efficient_complexity",
    "AnalyticModulus",
    "LipschitzModulus",
    "ModulusEstimate",
    "concave_majorant",
    "empirical_modulus",
    "mcshane_extend",
    "modulus_from_samples",
    "modulus_inverse",
    "smooth_modulus",
    "smooth_modulus_inverse",
    "LinearFormPoly",
    "MonomialCounts",
    "decompose_polynomial",
    "monomial_counts",
    "parse_poly_expr",
    "poly_derivative",
    "poly_eval",
    "poly_total_degree",
    "reciprocal_approx",
    "CompiledPoly",
    "CompileResult",
    "compile_function_to_shallow",
    "compile_poly_to_shallow",
    "finite_diff_derivative",
    "merge_shallow",
    "riemann_smooth_activation",
    "select_theta0",
    "VerticalizeResult",
    "split_outputs",
    "verticalize",
]
