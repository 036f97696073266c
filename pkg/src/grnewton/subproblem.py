"""The regularized Newton step.

One step from ``x_bar`` with parameter ``A > 0`` minimizes the model

    M_A(x_bar, y) = f(x_bar) + <grad f(x_bar), y - x_bar>
                  + (1/2) <H(x_bar)(y - x_bar), y - x_bar>
                  + A * rho(x_bar, y) + psi(y)

over dom psi, where rho is the Bregman distance of the scaling function.
For psi = 0 and a quadratic scaling the minimizer solves one shifted linear
system (direct factorization or matrix-free CG). Otherwise a proximal
gradient loop on the model is used: the model is (sigma*A)-strongly convex,
so the loop converges linearly and its final prox step yields an exact
subgradient of psi at the returned point.

The selected subgradient of F at the new point T is reconstructed as

    F'(T) = grad f(T) - grad f(x_bar) - H(x_bar)(T - x_bar)
          - A * (grad d(T) - grad d(x_bar))

which lies in the subdifferential of F at T up to the inner residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import LinearOperator, cg as sparse_cg

from .exceptions import InvalidInputError, NumericError
from .linalg import Array, DualVector, PrimalVector
from .problems import CompositeProblem
from .scaling import bregman, bregman_gradient_gap
from .validation import check_scalar, check_vector

EPS = float(np.finfo(np.float64).eps)


@dataclass
class InnerSolverConfig:
    """Tolerances for the composite-step proximal gradient loop and CG."""

    tol_abs: float = 1e-10
    tol_rel: float = 1e-8
    max_iterations: int = 10_000
    smooth_mode: str = "direct"  # "direct" or "cg" for the psi = 0 fast path
    cg_tol: float = 1e-12
    cg_max_iterations: int | None = None


@dataclass
class StepResult:
    """Outcome of one regularized Newton step."""

    T: PrimalVector
    selected_subgradient: DualVector
    model_value: float
    step_norm: float
    inner_iterations: int
    inner_residual: float
    certified: bool
    fp_noise: float
    lin_term: float
    quad_term: float
    breg: float


def regularization_parameter(g_norm: float, H: float, sigma: float) -> float:
    """Step-size rule A = (1/sigma) * sqrt(H * g_norm / 3)."""
    g_norm = check_scalar(g_norm, "g_norm", nonnegative=True)
    H = check_scalar(H, "H", positive=True)
    sigma = check_scalar(sigma, "sigma", positive=True)
    if sigma > 1.0:
        raise InvalidInputError("sigma must lie in (0, 1]")
    return np.sqrt(H * g_norm / 3.0) / sigma


def select_subgradient(
    problem: CompositeProblem, x_bar: PrimalVector, T: PrimalVector, A: float
) -> DualVector:
    """Reconstructed subgradient of F at T for a step taken from x_bar."""
    delta = T - x_bar
    return (
        problem.smooth.gradient(T)
        - problem.smooth.gradient(x_bar)
        - problem.smooth.hessian(x_bar).apply(delta)
        - A * bregman_gradient_gap(problem.scaling, x_bar, T)
    )


def model_value(
    problem: CompositeProblem, x_bar: PrimalVector, y: PrimalVector, A: float
) -> float:
    """Evaluate the step model M_A(x_bar, y)."""
    delta = y - x_bar
    return (
        problem.smooth.value(x_bar)
        + float(problem.smooth.gradient(x_bar) @ delta)
        + 0.5 * problem.smooth.hessian(x_bar).quad(delta)
        + A * bregman(problem.scaling, x_bar, y)
        + problem.simple.value(y)
    )


def _subgradient_noise(
    problem: CompositeProblem,
    x_bar: PrimalVector,
    T: PrimalVector,
    A: float,
    hess,
    hess_delta: DualVector,
) -> float:
    """Rounding-noise scale (dual norm) of the subgradient reconstruction.

    Gradient evaluations carry absolute rounding error proportional to the
    magnitudes of their intermediates, not of the (possibly cancelled)
    result, so the scale includes a curvature term: near an optimum the
    gradient is a difference of curvature-sized quantities.
    """
    dual = problem.norms.dual
    delta = T - x_bar
    step = float(np.linalg.norm(delta))
    if hess.has_matrix:
        curv = float(np.max(np.sum(np.abs(hess.matrix), axis=1)))
    else:
        curv = dual(hess_delta) / max(step, 1e-300)
    point_scale = 1.0 + float(np.linalg.norm(x_bar)) + step
    return EPS * (
        dual(problem.smooth.gradient(T))
        + dual(problem.smooth.gradient(x_bar))
        + dual(hess_delta)
        + A * dual(bregman_gradient_gap(problem.scaling, x_bar, T))
        + (curv + A) * point_scale
    )


def _package_step(
    problem: CompositeProblem,
    x_bar: PrimalVector,
    T: PrimalVector,
    A: float,
    inner_iterations: int,
    inner_residual: float,
    certified: bool,
) -> StepResult:
    grad = problem.smooth.gradient(x_bar)
    hess = problem.smooth.hessian(x_bar)
    delta = T - x_bar
    hess_delta = hess.apply(delta)
    lin_term = float(grad @ delta)
    quad_term = float(hess_delta @ delta)
    breg = bregman(problem.scaling, x_bar, T)
    mval = (
        problem.smooth.value(x_bar)
        + lin_term
        + 0.5 * quad_term
        + A * breg
        + problem.simple.value(T)
    )
    subgrad = (
        problem.smooth.gradient(T)
        - grad
        - hess_delta
        - A * bregman_gradient_gap(problem.scaling, x_bar, T)
    )
    return StepResult(
        T=T,
        selected_subgradient=subgrad,
        model_value=mval,
        step_norm=problem.norms.primal(delta),
        inner_iterations=inner_iterations,
        inner_residual=inner_residual,
        certified=certified,
        fp_noise=_subgradient_noise(problem, x_bar, T, A, hess, hess_delta),
        lin_term=lin_term,
        quad_term=quad_term,
        breg=breg,
    )


def solve_step_smooth(
    problem: CompositeProblem,
    x_bar: PrimalVector,
    A: float,
    mode: str = "direct",
    cg_tol: float = 1e-12,
    cg_max_iterations: int | None = None,
) -> StepResult:
    """Solve the step for psi = 0 and a quadratic scaling.

    Direct mode factorizes H(x_bar) + A*W (symmetric positive definite for
    convex f, A > 0 and positive scaling curvature W). CG mode solves the
    same system matrix-free; its residual target is scaled by A*min(W), a
    lower bound on the system's smallest eigenvalue, so the solution-space
    error stays below ``cg_tol``.
    """
    if problem.simple.kind != "zero":
        raise InvalidInputError("smooth step requires psi = 0")
    if not problem.scaling.quadratic:
        raise InvalidInputError("smooth step requires a quadratic scaling function")
    x_bar = check_vector(x_bar, dim=problem.dim, name="x_bar")
    A = check_scalar(A, "A", positive=True)
    grad = problem.smooth.gradient(x_bar)
    hess = problem.smooth.hessian(x_bar)
    w = problem.scaling.curvature_diagonal(problem.dim)
    if mode == "direct":
        M = hess.matrix + np.diag(A * w)
        try:
            factor = scipy.linalg.cho_factor(M, lower=True, check_finite=False)
        except scipy.linalg.LinAlgError as exc:
            raise NumericError(f"shifted system is not positive definite: {exc}") from exc
        delta = scipy.linalg.cho_solve(factor, -grad, check_finite=False)
        iterations = 1
    elif mode == "cg":
        op = LinearOperator(
            (problem.dim, problem.dim),
            matvec=lambda h: hess.apply(h) + A * w * h,
            dtype=np.float64,
        )
        counter = {"n": 0}

        def _count(_):
            counter["n"] += 1

        # Residual target scaled by a lower bound on the system's smallest
        # eigenvalue, so the solution error itself stays below cg_tol.
        lam_lo = A * float(np.min(w))
        if hess.has_matrix:
            lam_lo += max(float(np.linalg.eigvalsh(hess.matrix)[0]), 0.0)
        atol = max(cg_tol * lam_lo, 1e-300)
        maxiter = cg_max_iterations or (20 * problem.dim + 200)
        delta, info = sparse_cg(op, -grad, rtol=0.0, atol=atol, maxiter=maxiter, callback=_count)
        if info != 0:
            res = float(np.linalg.norm(op.matvec(delta) + grad))
            raise NumericError(
                f"CG did not converge within {maxiter} iterations (residual {res:.3e})"
            )
        iterations = counter["n"]
    else:
        raise InvalidInputError(f"unknown smooth-step mode {mode!r}")
    T = x_bar + delta
    # Stationarity residual of the model at T (machine-level for direct).
    residual_vec = grad + hess.apply(delta) + A * w * delta
    residual = problem.norms.dual(residual_vec)
    return _package_step(problem, x_bar, T, A, iterations, residual, certified=True)


def solve_step_composite(
    problem: CompositeProblem,
    x_bar: PrimalVector,
    A: float,
    inner: InnerSolverConfig | None = None,
    start: PrimalVector | None = None,
) -> StepResult:
    """Proximal-gradient solve of the step model for general psi.

    The smooth model part has Lipschitz gradient with constant
    lam_max(H(x_bar)) + A, giving the fixed step 1/(lam_max + A); the model
    is (sigma*A)-strongly convex so the loop converges linearly. Stops when
    the reconstructed model subgradient at the prox output has dual norm
    below max(tol_abs, tol_rel * sigma * A * |y - x_bar|). Exceeding the
    iteration cap returns a result flagged ``certified=False``.
    """
    inner = inner or InnerSolverConfig()
    x_bar = check_vector(x_bar, dim=problem.dim, name="x_bar")
    if not problem.feasible(x_bar):
        raise InvalidInputError("x_bar lies outside dom psi")
    A = check_scalar(A, "A", positive=True)
    grad = problem.smooth.gradient(x_bar)
    hess = problem.smooth.hessian(x_bar)
    scaling = problem.scaling
    sigma = scaling.sigma
    grad_d_xbar = scaling.gradient(x_bar)

    def grad_model(y: Array) -> Array:
        return grad + hess.apply(y - x_bar) + A * (scaling.gradient(y) - grad_d_xbar)

    t = 1.0 / (hess.largest_eigenvalue() + A)
    y = x_bar.copy() if start is None else problem.simple.project(
        check_vector(start, dim=problem.dim, name="start")
    )
    residual = np.inf
    iterations = 0
    certified = False
    gy = grad_model(y)
    for iterations in range(1, max(1, inner.max_iterations) + 1):
        y_next = problem.simple.prox(y - t * gy, t)
        gy_next = grad_model(y_next)
        # Prox optimality gives (y - t*gy - y_next)/t in the psi
        # subdifferential at y_next; combined with the model gradient there
        # this is an exact model subgradient at y_next.
        model_sub = gy_next - gy + (y - y_next) / t
        residual = problem.norms.dual(model_sub)
        y, gy = y_next, gy_next
        if residual <= max(inner.tol_abs, inner.tol_rel * sigma * A * problem.norms.primal(y - x_bar)):
            certified = True
            break
    return _package_step(
        problem, x_bar, y, A, iterations, float(residual), certified=certified
    )


def solve_step(
    problem: CompositeProblem,
    x_bar: PrimalVector,
    A: float,
    inner: InnerSolverConfig | None = None,
    start: PrimalVector | None = None,
) -> StepResult:
    """Dispatch to the shifted-system fast path when psi = 0."""
    inner = inner or InnerSolverConfig()
    if problem.simple.kind == "zero" and problem.scaling.quadratic:
        return solve_step_smooth(
            problem,
            x_bar,
            A,
            mode=inner.smooth_mode,
            cg_tol=inner.cg_tol,
            cg_max_iterations=inner.cg_max_iterations,
        )
    return solve_step_composite(problem, x_bar, A, inner=inner, start=start)


def model_lower_bound_check(
    step: StepResult,
    problem: CompositeProblem,
    x_bar: PrimalVector,
    A: float,
    y: PrimalVector,
    slack_rel: float = 1e-8,
) -> bool:
    """Check the model's strong-convexity lower bound at a trial point y:

    M_A(x_bar, y) >= M_A(x_bar) + (1/2) <H(x_bar)(y - T), y - T>
                   + (sigma A / 2) |y - T|^2  -  slack

    valid for every y in dom psi when T minimizes the model. The slack
    combines relative rounding tolerance with a first-order correction for
    the inner residual at the returned (inexact) T.
    """
    y = check_vector(y, dim=problem.dim, name="y")
    if not problem.feasible(y):
        raise InvalidInputError("y lies outside dom psi")
    lhs = model_value(problem, x_bar, y, A)
    diff = y - step.T
    rhs = (
        step.model_value
        + 0.5 * problem.smooth.hessian(x_bar).quad(diff)
        + 0.5 * problem.scaling.sigma * A * problem.norms.primal(diff) ** 2
    )
    slack = slack_rel * (1.0 + abs(step.model_value) + abs(lhs))
    slack += step.inner_residual * (1.0 + problem.norms.primal(diff))
    return lhs >= rhs - slack
