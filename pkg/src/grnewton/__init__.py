"""Gradient-regularized Newton methods for composite convex minimization.

Second-order solvers whose Newton model is regularized by a Bregman
distance with coefficient proportional to the square root of the current
subgradient norm, in three variants (fixed curvature estimate, adaptive
line search, contracted proximal acceleration), together with a
certificate engine that checks the methods' per-step and whole-trace
convergence guarantees on recorded runs.
"""

from .baselines import run_cubic_newton
from .benchmarks import build_instance, default_suite, instance_kinds
from .certificates import (
    Certificate,
    certify_trace,
    check_accel_budget,
    check_functional_rate,
    check_gradient_complexity,
    check_gradient_complexity_uc,
    check_iteration_budget,
    check_line_search_budget,
    check_linear_rate_uc,
    check_superlinear,
    check_ubound_uc,
    step_certificates,
)
from .datasets import LabeledDataset, load_libsvm, synthetic_classification
from .exceptions import GRNewtonError, InvalidInputError, NumericError, ParseError
from .linalg import (
    HessianView,
    NormPair,
    apply_hessian,
    dual_norm,
    euclidean_norms,
    weighted_norms,
)
from .problems import (
    CompositeProblem,
    CompositePart,
    SmoothOracle,
    box_part,
    estimate_lips_hessian,
    l1_part,
    make_box_quadratic,
    make_cubic_regression,
    make_cubic_uc,
    make_l1_quadratic,
    make_log_sum_exp,
    make_logistic,
    zero_part,
)
from .scaling import (
    EuclideanScaling,
    ScalingFunction,
    WeightedScaling,
    bregman,
    bregman_gradient_gap,
)
from .solvers import (
    GradRegNewton,
    GradRegNewtonAccelerated,
    GradRegNewtonLineSearch,
    acceptance_test,
    prox_function_beta,
    reference_solve,
    run_accelerated,
    run_basic,
    run_line_search,
)
from .subproblem import (
    InnerSolverConfig,
    StepResult,
    model_lower_bound_check,
    model_value,
    regularization_parameter,
    select_subgradient,
    solve_step,
    solve_step_composite,
    solve_step_smooth,
)
from .trace import IterationRecord, Trace

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CompositePart",
    "CompositeProblem",
    "EuclideanScaling",
    "GRNewtonError",
    "GradRegNewton",
    "GradRegNewtonAccelerated",
    "GradRegNewtonLineSearch",
    "HessianView",
    "InnerSolverConfig",
    "InvalidInputError",
    "IterationRecord",
    "LabeledDataset",
    "NormPair",
    "NumericError",
    "ParseError",
    "ScalingFunction",
    "SmoothOracle",
    "StepResult",
    "Trace",
    "WeightedScaling",
    "acceptance_test",
    "apply_hessian",
    "box_part",
    "bregman",
    "bregman_gradient_gap",
    "build_instance",
    "certify_trace",
    "check_accel_budget",
    "check_functional_rate",
    "check_gradient_complexity",
    "check_gradient_complexity_uc",
    "check_iteration_budget",
    "check_line_search_budget",
    "check_linear_rate_uc",
    "check_superlinear",
    "check_ubound_uc",
    "default_suite",
    "dual_norm",
    "estimate_lips_hessian",
    "euclidean_norms",
    "instance_kinds",
    "l1_part",
    "load_libsvm",
    "make_box_quadratic",
    "make_cubic_regression",
    "make_cubic_uc",
    "make_l1_quadratic",
    "make_log_sum_exp",
    "make_logistic",
    "model_lower_bound_check",
    "model_value",
    "prox_function_beta",
    "reference_solve",
    "regularization_parameter",
    "run_accelerated",
    "run_basic",
    "run_cubic_newton",
    "run_line_search",
    "select_subgradient",
    "solve_step",
    "solve_step_composite",
    "solve_step_smooth",
    "step_certificates",
    "synthetic_classification",
    "weighted_norms",
    "zero_part",
]
