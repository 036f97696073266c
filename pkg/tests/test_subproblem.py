import numpy as np
import pytest
import scipy.optimize

import grnewton as gn
from grnewton.exceptions import InvalidInputError, NumericError
from grnewton.linalg import euclidean_norms
from grnewton.problems import CompositeProblem, QuadraticOracle, zero_part
from grnewton.scaling import EuclideanScaling
from grnewton.subproblem import InnerSolverConfig


def quad_problem(Q, b=None):
    oracle = QuadraticOracle(np.atleast_2d(Q), b)
    return CompositeProblem(
        smooth=oracle,
        simple=zero_part(),
        scaling=EuclideanScaling(),
        norms=euclidean_norms(),
        name="quad",
    )


def test_regularization_parameter_examples():
    assert gn.regularization_parameter(0.0, 3.0, 1.0) == 0.0
    assert gn.regularization_parameter(1.0, 3.0, 1.0) == pytest.approx(1.0, rel=1e-15)
    assert gn.regularization_parameter(2.0, 6.0, 0.5) == pytest.approx(4.0, rel=1e-15)


def test_regularization_parameter_validation():
    with pytest.raises(InvalidInputError):
        gn.regularization_parameter(-1.0, 3.0, 1.0)
    with pytest.raises(InvalidInputError):
        gn.regularization_parameter(1.0, 0.0, 1.0)
    with pytest.raises(InvalidInputError):
        gn.regularization_parameter(1.0, 1.0, 1.5)


def test_smooth_step_fixed_point_at_stationarity():
    p = quad_problem(np.eye(2))
    step = gn.solve_step_smooth(p, np.zeros(2), A=1.0)
    np.testing.assert_allclose(step.T, np.zeros(2))
    np.testing.assert_allclose(step.selected_subgradient, np.zeros(2))


def test_smooth_step_scalar_example():
    # f = x^2/2, x_bar = 1, A = 1: T = 1 - 1/(1+1) = 0.5; F'(T) = -A (T - 1) = 0.5.
    p = quad_problem([[1.0]])
    step = gn.solve_step_smooth(p, np.array([1.0]), A=1.0)
    assert step.T[0] == pytest.approx(0.5, rel=1e-14)
    assert step.selected_subgradient[0] == pytest.approx(0.5, rel=1e-14)


def test_smooth_step_two_dim_example():
    # f = |x|^2/2 from x_bar = (2, 0) with A = 3: the shifted solve moves by
    # (1+3)^{-1} * 2 = 0.5, so T = (1.5, 0). Matches the scalar example's
    # closed form T = x_bar * A/(1+A).
    p = quad_problem(np.eye(2))
    step = gn.solve_step_smooth(p, np.array([2.0, 0.0]), A=3.0)
    np.testing.assert_allclose(step.T, [1.5, 0.0], rtol=1e-14)
    assert step.step_norm == pytest.approx(0.5, rel=1e-14)


def test_smooth_step_matches_brute_force_minimizer(logistic_small):
    rng = np.random.default_rng(2)
    x_bar = 0.5 * rng.standard_normal(logistic_small.dim)
    A = 2.0

    def model(y):
        return gn.model_value(logistic_small, x_bar, y, A)

    step = gn.solve_step_smooth(logistic_small, x_bar, A)
    res = scipy.optimize.minimize(model, x_bar, method="BFGS", options={"gtol": 1e-10})
    assert np.linalg.norm(step.T - res.x) <= 1e-5 * (1.0 + np.linalg.norm(step.T))
    assert step.model_value <= res.fun + 1e-9


def test_direct_and_cg_agree(logistic_small):
    rng = np.random.default_rng(4)
    for _ in range(5):
        x_bar = rng.standard_normal(logistic_small.dim)
        g = logistic_small.norms.dual(logistic_small.smooth.gradient(x_bar))
        A = gn.regularization_parameter(g, 4.5 * logistic_small.smooth.lips_hessian, 1.0)
        direct = gn.solve_step_smooth(logistic_small, x_bar, A, mode="direct")
        cg = gn.solve_step_smooth(logistic_small, x_bar, A, mode="cg", cg_tol=1e-12)
        err = np.linalg.norm(direct.T - cg.T)
        assert err <= 10.0 * 1e-12 * (1.0 + np.linalg.norm(direct.T))


def test_cg_iteration_cap_reports_residual():
    p = quad_problem(np.eye(40))
    with pytest.raises(NumericError, match="residual"):
        gn.solve_step_smooth(
            p, np.ones(40), A=1e-8, mode="cg", cg_tol=1e-14, cg_max_iterations=1
        )


def test_composite_consistent_with_smooth_on_zero_part(logistic_small):
    rng = np.random.default_rng(6)
    x_bar = 0.3 * rng.standard_normal(logistic_small.dim)
    A = 1.5
    smooth = gn.solve_step_smooth(logistic_small, x_bar, A)
    composite = gn.solve_step_composite(
        logistic_small, x_bar, A, inner=InnerSolverConfig(tol_abs=1e-12, tol_rel=1e-10)
    )
    assert composite.certified
    assert np.linalg.norm(smooth.T - composite.T) <= 1e-8 * (1.0 + np.linalg.norm(smooth.T))


def test_composite_l1_scalar_example():
    # f = (x-3)^2/2, psi = |x|, x_bar = 0, A = 1: minimize 4.5 - 3y + y^2 + |y|
    # gives T = 1 with psi'(T) = 1 and F'(T) = grad f(1) + 1 = -1.
    p = gn.make_l1_quadratic(np.eye(1), np.array([3.0]), lam=1.0)
    step = gn.solve_step_composite(p, np.zeros(1), A=1.0)
    assert step.T[0] == pytest.approx(1.0, abs=1e-9)
    assert step.selected_subgradient[0] == pytest.approx(-1.0, abs=1e-8)


def test_composite_box_active_constraint():
    # f = (x+1)^2/2 on [0, inf): the step from 0 stays pinned at 0 and the
    # selected subgradient certifies optimality.
    p = gn.make_box_quadratic(np.eye(1), np.array([-1.0]), lo=[0.0], hi=[np.inf])
    step = gn.solve_step_composite(p, np.zeros(1), A=1.0)
    assert step.T[0] == pytest.approx(0.0, abs=1e-12)
    assert step.selected_subgradient[0] == pytest.approx(0.0, abs=1e-9)
    # variational behavior: <F'(T), y - T> + psi(y) >= psi(T) for feasible y
    for y in np.linspace(0.0, 3.0, 7):
        assert step.selected_subgradient[0] * (y - step.T[0]) >= -1e-9


def test_composite_matches_cvxpy_oracle():
    cvxpy = pytest.importorskip("cvxpy")
    rng = np.random.default_rng(8)
    n = 5
    M = rng.standard_normal((n, n))
    Q = M @ M.T + 0.5 * np.eye(n)
    b = rng.standard_normal(n)
    lam = 0.7
    p = gn.make_l1_quadratic(Q, b, lam)
    x_bar = rng.standard_normal(n)
    A = 1.3
    step = gn.solve_step_composite(
        p, x_bar, A, inner=InnerSolverConfig(tol_abs=1e-12, tol_rel=1e-10)
    )
    y = cvxpy.Variable(n)
    grad = p.smooth.gradient(x_bar)
    H = p.smooth.hessian(x_bar).matrix
    model = (
        p.smooth.value(x_bar)
        + grad @ (y - x_bar)
        + 0.5 * cvxpy.quad_form(y - x_bar, H)
        + 0.5 * A * cvxpy.sum_squares(y - x_bar)
        + lam * cvxpy.norm1(y)
    )
    prob = cvxpy.Problem(cvxpy.Minimize(model))
    prob.solve(solver="CLARABEL")
    assert np.linalg.norm(step.T - y.value) <= 1e-6 * (1.0 + np.linalg.norm(step.T))
    assert step.model_value == pytest.approx(prob.value, rel=1e-8, abs=1e-8)


def test_composite_residual_meets_inner_tolerance(l1_quadratic_problem):
    # A certified step's model-subgradient residual obeys the declared rule.
    rng = np.random.default_rng(18)
    inner = InnerSolverConfig(tol_abs=1e-10, tol_rel=1e-8)
    x_bar = rng.standard_normal(l1_quadratic_problem.dim)
    A = 0.9
    step = gn.solve_step_composite(l1_quadratic_problem, x_bar, A, inner=inner)
    sigma = l1_quadratic_problem.scaling.sigma
    assert step.certified
    assert step.inner_residual <= max(
        inner.tol_abs, inner.tol_rel * sigma * A * step.step_norm
    )


def test_composite_cap_flags_uncertified():
    # Anisotropic Q, so one prox-gradient pass cannot solve the model.
    p = gn.make_l1_quadratic(np.diag([3.0, 1.0, 0.5]), np.array([3.0, -2.0, 1.0]), lam=0.5)
    step = gn.solve_step_composite(
        p, np.zeros(3), A=1.0, inner=InnerSolverConfig(max_iterations=2)
    )
    assert not step.certified
    assert step.inner_residual > 0.0


def test_select_subgradient_identity_at_fixed_point(logistic_small):
    x = np.full(logistic_small.dim, 0.2)
    np.testing.assert_allclose(
        gn.select_subgradient(logistic_small, x, x, A=2.0), np.zeros(logistic_small.dim)
    )


def test_select_subgradient_quadratic_closed_form():
    # For quadratic f and Euclidean scaling the Taylor terms cancel exactly,
    # leaving F'(T) = -A (T - x_bar).
    rng = np.random.default_rng(10)
    M = rng.standard_normal((4, 4))
    p = quad_problem(M @ M.T, rng.standard_normal(4))
    x_bar = rng.standard_normal(4)
    T = rng.standard_normal(4)
    A = 0.8
    np.testing.assert_allclose(
        gn.select_subgradient(p, x_bar, T, A), -A * (T - x_bar), atol=1e-12
    )


def test_model_lower_bound_at_minimizer_and_anchor():
    p = quad_problem([[1.0]])
    x_bar = np.array([1.0])
    step = gn.solve_step_smooth(p, x_bar, A=1.0)
    assert gn.model_lower_bound_check(step, p, x_bar, 1.0, step.T)
    assert gn.model_lower_bound_check(step, p, x_bar, 1.0, x_bar)
    # strict gap at y = x_bar for this instance
    lhs = gn.model_value(p, x_bar, x_bar, 1.0)
    assert lhs > step.model_value


def test_model_lower_bound_random_points(l1_quadratic_problem):
    rng = np.random.default_rng(12)
    x_bar = rng.standard_normal(l1_quadratic_problem.dim)
    A = 2.0
    step = gn.solve_step_composite(l1_quadratic_problem, x_bar, A)
    for _ in range(200):
        y = 2.0 * rng.standard_normal(l1_quadratic_problem.dim)
        assert gn.model_lower_bound_check(step, l1_quadratic_problem, x_bar, A, y)


def test_step_size_and_norm_bounds_random(logistic_small):
    # |T - x| <= g/(sigma A), H|T - x| <= 3 sigma A, and both subgradient
    # norm bounds, on fresh random steps.
    rng = np.random.default_rng(14)
    sigma = logistic_small.scaling.sigma
    L2 = logistic_small.smooth.lips_hessian
    H = max(4.5 * sigma * L2, L2)
    c = 1.0 / sigma + 1.5 * L2 / H
    for _ in range(50):
        x_bar = rng.standard_normal(logistic_small.dim)
        g = logistic_small.norms.dual(logistic_small.smooth.gradient(x_bar))
        A = gn.regularization_parameter(g, H, sigma)
        step = gn.solve_step(logistic_small, x_bar, A)
        g_new = logistic_small.norms.dual(step.selected_subgradient)
        assert step.step_norm <= g / (sigma * A) * (1.0 + 1e-8)
        assert H * step.step_norm <= 3.0 * sigma * A * (1.0 + 1e-8)
        assert g_new <= sigma * A * c * step.step_norm * (1.0 + 1e-6) + 1e-12
        assert g_new <= c * g * (1.0 + 1e-6)


def test_solve_step_requires_positive_A(logistic_small):
    with pytest.raises(InvalidInputError):
        gn.solve_step_smooth(logistic_small, np.zeros(logistic_small.dim), A=0.0)


def test_solve_step_smooth_rejects_composite(l1_quadratic_problem):
    with pytest.raises(InvalidInputError):
        gn.solve_step_smooth(l1_quadratic_problem, np.zeros(l1_quadratic_problem.dim), A=1.0)


def test_weighted_scaling_shifted_system():
    # With d(x) = sum w_i x_i^2 / 2 the smooth step solves (Q + A W) d = -grad.
    from grnewton.scaling import WeightedScaling

    rng = np.random.default_rng(16)
    n = 5
    M = rng.standard_normal((n, n))
    Q = M @ M.T + np.eye(n)
    b = rng.standard_normal(n)
    w = np.linspace(0.2, 1.0, n)
    oracle = QuadraticOracle(Q, b)
    p = CompositeProblem(
        smooth=oracle,
        simple=zero_part(),
        scaling=WeightedScaling(w),
        norms=euclidean_norms(),
    )
    x_bar = rng.standard_normal(n)
    A = 1.7
    step = gn.solve_step_smooth(p, x_bar, A)
    expected = x_bar + np.linalg.solve(Q + A * np.diag(w), -(Q @ x_bar - b))
    np.testing.assert_allclose(step.T, expected, rtol=1e-10)
