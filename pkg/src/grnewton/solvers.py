"""The three optimization loops: basic, adaptive line search, accelerated.

All three are exposed as sklearn-style estimators (constructor holds the
hyperparameters, ``fit(problem, x0)`` runs the loop and stores the fitted
attributes ``trace_``, ``x_``, ``n_iter_`` ...) plus thin functional
wrappers returning the trace directly.

Basic loop, one iteration from x_k with subgradient F'_k:

    g_k = |F'_k|_*,   A_k = (1/sigma) sqrt(H g_k / 3),
    x_{k+1} = argmin of the A_k-regularized model,
    F'_{k+1} reconstructed from the step's optimality condition.

The line-search variant doubles a working estimate H_k until the cubic
upper bound holds at the trial step, then relaxes it; the accelerated
variant wraps the basic loop in contracted proximal iterations with a
cubic prox function and coefficients b_k growing like k^2.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .certificates import TraceConstants, step_certificates
from .exceptions import InvalidInputError, NumericError
from .linalg import PrimalVector, euclidean_norms
from .problems import (
    CompositeProblem,
    ContractedOracle,
    NormCubeOracle,
    SumOracle,
    TiltedOracle,
)
from .scaling import EuclideanScaling
from .subproblem import (
    InnerSolverConfig,
    StepResult,
    regularization_parameter,
    solve_step,
)
from .trace import IterationRecord, Trace
from .validation import check_scalar, check_vector

MAX_DOUBLINGS = 64


def acceptance_test(problem: CompositeProblem, x_bar, T, H: float) -> bool:
    """Cubic upper bound at a trial step:

    f(T) <= f(x_bar) + <grad f(x_bar), d> + <H(x_bar) d, d>/2 + (H/6) |d|^3

    with d = T - x_bar, up to slack 1e-10 (1 + |f(x_bar)|).
    """
    x_bar = check_vector(x_bar, dim=problem.dim, name="x_bar")
    T = check_vector(T, dim=problem.dim, name="T")
    delta = T - x_bar
    f_bar = problem.smooth.value(x_bar)
    rhs = (
        f_bar
        + float(problem.smooth.gradient(x_bar) @ delta)
        + 0.5 * problem.smooth.hessian(x_bar).quad(delta)
        + (H / 6.0) * problem.norms.primal(delta) ** 3
    )
    return problem.smooth.value(T) <= rhs + 1e-10 * (1.0 + abs(f_bar))


class CubicProxFunction:
    """phi(x) = (2/3) ||x - center||^3, the accelerated scheme's prox term.

    The coefficient 2/3 makes the induced gap beta_phi(x, y) at least
    (1/3) ||y - x||^3 for all pairs (the norm cube's provable lower-growth
    constant is half its coefficient).
    """

    def __init__(self, center):
        self.center = np.asarray(center, dtype=np.float64)

    def value(self, x) -> float:
        return (2.0 / 3.0) * float(np.linalg.norm(x - self.center)) ** 3

    def gradient(self, x):
        r = x - self.center
        return 2.0 * float(np.linalg.norm(r)) * r

    def bregman(self, v, y) -> float:
        return self.value(y) - self.value(v) - float(self.gradient(v) @ (y - v))


def prox_function_beta(x_anchor, y) -> float:
    """beta_phi(x_anchor, y) for phi anchored at x_anchor: (2/3)||y - x_anchor||^3."""
    x_anchor = np.asarray(x_anchor, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return CubicProxFunction(x_anchor).bregman(x_anchor, y)


def validate_prox_function(
    center, dim: int, seed: int = 0, n_pairs: int = 200, radius: float = 10.0
) -> None:
    """Sampled guard for beta_phi(x, y) >= (1/3)||y - x||^3.

    Raises :class:`NumericError` if any sampled pair violates the bound;
    run before each accelerated campaign.
    """
    phi = CubicProxFunction(center)
    rng = np.random.default_rng(seed)
    for _ in range(n_pairs):
        x = phi.center + radius * rng.standard_normal(dim) * rng.random()
        y = phi.center + radius * rng.standard_normal(dim) * rng.random()
        gap = phi.bregman(x, y)
        need = float(np.linalg.norm(y - x)) ** 3 / 3.0
        if gap < need * (1.0 - 1e-12) - 1e-12:
            raise NumericError(
                f"prox-function lower-growth check failed: {gap} < {need}"
            )


def _state_record(problem: CompositeProblem, k: int, x, subgrad) -> IterationRecord:
    f = problem.smooth.value(x)
    return IterationRecord(
        k=k,
        x=x,
        f_value=f,
        F_value=f + problem.simple.value(x),
        g_norm=problem.norms.dual(subgrad),
        subgradient=subgrad,
    )


def _base_header(problem: CompositeProblem, mode: str, **extra) -> dict:
    header = {
        "version": 1,
        "mode": mode,
        "problem": problem.describe(),
        "sigma": problem.scaling.sigma,
        "norms": problem.norms.describe(),
    }
    if problem.reference_optimum is not None:
        header["F_star"] = float(problem.reference_optimum[0])
        header["x_star"] = [float(v) for v in problem.reference_optimum[1]]
    header.update(extra)
    return header


def _fill_step_fields(rec: IterationRecord, A, H_used, i_k, step: StepResult) -> None:
    rec.A = float(A)
    rec.H_used = float(H_used)
    rec.i_k = int(i_k)
    rec.step_norm = step.step_norm
    rec.lin_term = step.lin_term
    rec.quad_term = step.quad_term
    rec.breg = step.breg
    rec.model_value = step.model_value
    rec.inner_iterations = step.inner_iterations
    rec.inner_residual = step.inner_residual
    rec.fp_noise = step.fp_noise
    rec.step_certified = step.certified


def _run_loop(
    problem: CompositeProblem,
    x0,
    F0_sub,
    mode: str,
    H: float | None,
    H0: float | None,
    grad_tolerance: float,
    f_gap_tolerance: float | None,
    max_iterations: int,
    inner: InnerSolverConfig,
) -> Trace:
    x = check_vector(x0, dim=problem.dim, name="x0")
    if not problem.feasible(x):
        raise InvalidInputError("x0 lies outside dom psi")
    subgrad = (
        problem.initial_subgradient(x)
        if F0_sub is None
        else check_vector(F0_sub, dim=problem.dim, name="F0_sub")
    )
    sigma = problem.scaling.sigma
    F_star = problem.reference_optimum[0] if problem.reference_optimum else None
    L2 = problem.smooth.lips_hessian
    header = _base_header(
        problem,
        mode,
        H=H,
        H0=H0,
        grad_tolerance=grad_tolerance,
        f_gap_tolerance=f_gap_tolerance,
        max_iterations=max_iterations,
        inner={
            "tol_abs": inner.tol_abs,
            "tol_rel": inner.tol_rel,
            "max_iterations": inner.max_iterations,
            "smooth_mode": inner.smooth_mode,
            "cg_tol": inner.cg_tol,
        },
    )
    base_h = H if mode == "basic" else H0
    if base_h is not None and base_h > 0.0:
        header["c"] = 1.0 / sigma + (1.5 * L2 / base_h if L2 > 0.0 else 0.0)
    consts = TraceConstants.from_header(header)
    records = [_state_record(problem, 0, x, subgrad)]
    H_current = H0 if mode == "line_search" else H
    stop_reason = "max_iterations"
    while True:
        rec = records[-1]
        if rec.g_norm <= grad_tolerance:
            stop_reason = "grad_tolerance"
            break
        if (
            f_gap_tolerance is not None
            and F_star is not None
            and rec.F_value - F_star <= f_gap_tolerance
        ):
            stop_reason = "f_gap_tolerance"
            break
        if rec.k >= max_iterations:
            break
        try:
            if mode == "basic":
                H_used, i_k = H_current, 0
                A = regularization_parameter(rec.g_norm, H_used, sigma)
                step = solve_step(problem, rec.x, A, inner=inner)
            else:
                step = None
                H_used, i_k, A = H_current, 0, 0.0
                for i in range(MAX_DOUBLINGS + 1):
                    H_try = 2.0**i * H_current
                    A_try = regularization_parameter(rec.g_norm, H_try, sigma)
                    candidate = solve_step(problem, rec.x, A_try, inner=inner)
                    if acceptance_test(problem, rec.x, candidate.T, H_try):
                        step, H_used, i_k, A = candidate, H_try, i, A_try
                        break
                if step is None:
                    raise NumericError(
                        f"line search exceeded {MAX_DOUBLINGS} doublings at k={rec.k}; "
                        "the Hessian-Lipschitz estimate looks wrong"
                    )
                H_current = max(H0, 2.0 ** (i_k - 1) * H_current)
        except NumericError as exc:
            raise NumericError(f"step failed at iteration {rec.k}: {exc}") from exc
        _fill_step_fields(rec, A, H_used, i_k, step)
        new_rec = _state_record(problem, rec.k + 1, step.T, step.selected_subgradient)
        records.append(new_rec)
        rec.certificates = [
            c.to_json_dict() for c in step_certificates(rec, new_rec, consts)
        ]
    trace = Trace(header=header, records=records)
    trace.summary = {
        "stop_reason": stop_reason,
        "n_iterations": len(records) - 1,
        "converged": stop_reason != "max_iterations",
        "final_g_norm": records[-1].g_norm,
        "final_F_value": records[-1].F_value,
    }
    return trace


def _resolve_h(problem: CompositeProblem, H) -> float:
    """Resolve the 'auto' curvature estimate.

    Uses the budget-optimal max((9/2) sigma L2, L2); instances declaring
    cubic lower growth get the geometric-rate-optimal max(3 sigma L2, L2)
    instead. A tiny positive floor keeps the step defined when L2 = 0.
    """
    if H == "auto" or H is None:
        L2 = problem.smooth.lips_hessian
        sigma = problem.scaling.sigma
        tuned = 3.0 if problem.smooth.uniform_convexity_sigma3 > 0.0 else 4.5
        return max(tuned * sigma * L2, L2, 1e-12)
    return check_scalar(H, "H", positive=True)


class _BaseGradRegNewton(BaseEstimator):
    """Shared estimator plumbing: inner-solver knobs and fitted attributes."""

    _mode = "basic"

    def _inner_config(self) -> InnerSolverConfig:
        return InnerSolverConfig(
            tol_abs=self.inner_tol_abs,
            tol_rel=self.inner_tol_rel,
            max_iterations=self.inner_max_iterations,
            smooth_mode=self.smooth_mode,
            cg_tol=self.cg_tol,
        )

    def _finalize(self, trace: Trace) -> "_BaseGradRegNewton":
        self.trace_ = trace
        final = trace.final
        self.x_ = final.x
        self.F_ = final.F_value
        self.g_norm_ = final.g_norm
        self.n_iter_ = trace.summary["n_iterations"]
        self.stop_reason_ = trace.summary["stop_reason"]
        self.converged_ = trace.summary["converged"]
        return self

    def certify(self, **kwargs):
        from .certificates import certify_trace

        return certify_trace(self.trace_, **kwargs)


class GradRegNewton(_BaseGradRegNewton):
    """Basic method with a fixed curvature estimate H.

    Parameters
    ----------
    H : float or "auto"
        Estimate of the Hessian-Lipschitz constant; the convergence
        certificates are armed only when H >= L2. "auto" resolves to
        max(4.5 * sigma * L2, L2) for the problem's declared L2, or
        max(3 * sigma * L2, L2) when cubic lower growth is declared.
    grad_tolerance : float
        Primary stop: dual norm of the selected subgradient.
    f_gap_tolerance : float, optional
        Secondary stop on F(x_k) - F*, used when the problem carries a
        reference optimum.
    """

    _mode = "basic"

    def __init__(
        self,
        H="auto",
        grad_tolerance: float = 1e-9,
        f_gap_tolerance: float | None = None,
        max_iterations: int = 500,
        smooth_mode: str = "direct",
        cg_tol: float = 1e-12,
        inner_tol_abs: float = 1e-10,
        inner_tol_rel: float = 1e-8,
        inner_max_iterations: int = 10_000,
    ):
        self.H = H
        self.grad_tolerance = grad_tolerance
        self.f_gap_tolerance = f_gap_tolerance
        self.max_iterations = max_iterations
        self.smooth_mode = smooth_mode
        self.cg_tol = cg_tol
        self.inner_tol_abs = inner_tol_abs
        self.inner_tol_rel = inner_tol_rel
        self.inner_max_iterations = inner_max_iterations

    def fit(self, problem: CompositeProblem, x0=None, initial_subgradient=None):
        x0 = np.zeros(problem.dim) if x0 is None else x0
        trace = _run_loop(
            problem,
            x0,
            initial_subgradient,
            mode="basic",
            H=_resolve_h(problem, self.H),
            H0=None,
            grad_tolerance=self.grad_tolerance,
            f_gap_tolerance=self.f_gap_tolerance,
            max_iterations=self.max_iterations,
            inner=self._inner_config(),
        )
        return self._finalize(trace)


class GradRegNewtonLineSearch(_BaseGradRegNewton):
    """Adaptive variant: doubles a working H until the cubic upper bound
    accepts the trial step, then halves it (floored at H0) for the next
    iteration. Needs no prior knowledge of the Hessian-Lipschitz constant.
    """

    _mode = "line_search"

    def __init__(
        self,
        H0: float = 1.0,
        grad_tolerance: float = 1e-9,
        f_gap_tolerance: float | None = None,
        max_iterations: int = 500,
        smooth_mode: str = "direct",
        cg_tol: float = 1e-12,
        inner_tol_abs: float = 1e-10,
        inner_tol_rel: float = 1e-8,
        inner_max_iterations: int = 10_000,
    ):
        self.H0 = H0
        self.grad_tolerance = grad_tolerance
        self.f_gap_tolerance = f_gap_tolerance
        self.max_iterations = max_iterations
        self.smooth_mode = smooth_mode
        self.cg_tol = cg_tol
        self.inner_tol_abs = inner_tol_abs
        self.inner_tol_rel = inner_tol_rel
        self.inner_max_iterations = inner_max_iterations

    def fit(self, problem: CompositeProblem, x0=None, initial_subgradient=None):
        x0 = np.zeros(problem.dim) if x0 is None else x0
        trace = _run_loop(
            problem,
            x0,
            initial_subgradient,
            mode="line_search",
            H=None,
            H0=check_scalar(self.H0, "H0", positive=True),
            grad_tolerance=self.grad_tolerance,
            f_gap_tolerance=self.f_gap_tolerance,
            max_iterations=self.max_iterations,
            inner=self._inner_config(),
        )
        return self._finalize(trace)


class GradRegNewtonAccelerated(_BaseGradRegNewton):
    """Contracted proximal acceleration of the basic method.

    Outer iteration k forms the contracted objective

        h_{k+1}(x) = B_{k+1} f((b_{k+1} x + B_k x_k)/B_{k+1})
                   + b_{k+1} psi(x) + beta_phi(v_k; x)

    with b_{k+1} = (k+1)^2 / (9 L2(f)), B_{k+1} = B_k + b_{k+1} and
    phi(x) = (2/3)||x - x0||^3, runs the basic method on it (warm-started
    at v_k) until a subgradient of dual norm <= delta is found, and averages

        x_{k+1} = (b_{k+1} v_{k+1} + B_k x_k) / B_{k+1}.

    ``delta`` defaults to (1/(2 * 3^{7/3})) (eps / L2)^{2/3} for the target
    gap eps given by ``f_gap_tolerance``.
    """

    _mode = "accelerated"

    def __init__(
        self,
        f_gap_tolerance: float = 1e-6,
        delta: float | None = None,
        grad_tolerance: float = 0.0,
        max_iterations: int = 200,
        inner_basic_max_iterations: int = 2_000,
        smooth_mode: str = "direct",
        cg_tol: float = 1e-12,
        inner_tol_abs: float = 1e-12,
        inner_tol_rel: float = 1e-8,
        inner_max_iterations: int = 10_000,
        prox_guard_seed: int = 0,
    ):
        self.f_gap_tolerance = f_gap_tolerance
        self.delta = delta
        self.grad_tolerance = grad_tolerance
        self.max_iterations = max_iterations
        self.inner_basic_max_iterations = inner_basic_max_iterations
        self.smooth_mode = smooth_mode
        self.cg_tol = cg_tol
        self.inner_tol_abs = inner_tol_abs
        self.inner_tol_rel = inner_tol_rel
        self.inner_max_iterations = inner_max_iterations
        self.prox_guard_seed = prox_guard_seed

    def fit(self, problem: CompositeProblem, x0=None, initial_subgradient=None):
        if problem.norms.kind != "euclidean" or not isinstance(
            problem.scaling, EuclideanScaling
        ):
            raise InvalidInputError("the accelerated scheme requires the Euclidean setup")
        L2f = problem.smooth.lips_hessian
        if L2f <= 0.0:
            raise InvalidInputError(
                "the accelerated scheme needs a positive Hessian-Lipschitz constant"
            )
        eps = check_scalar(self.f_gap_tolerance, "f_gap_tolerance", positive=True)
        delta = self.delta
        if delta is None:
            delta = accel_subgradient_tolerance(eps, L2f)
        delta = check_scalar(delta, "delta", positive=True)
        x = np.zeros(problem.dim) if x0 is None else check_vector(x0, dim=problem.dim)
        if not problem.feasible(x):
            raise InvalidInputError("x0 lies outside dom psi")
        validate_prox_function(x, problem.dim, seed=self.prox_guard_seed)
        phi = CubicProxFunction(x)
        F_star = problem.reference_optimum[0] if problem.reference_optimum else None
        header = _base_header(
            problem,
            "accelerated",
            grad_tolerance=self.grad_tolerance,
            f_gap_tolerance=eps,
            delta=delta,
            max_iterations=self.max_iterations,
            L2_f=L2f,
            # The scheme's coefficient calibration assumes three derivatives
            # of the smooth part; instances without them still run, but
            # their whole-trace certificates are marked heuristic.
            third_derivative_heuristic=not problem.smooth.thrice_differentiable,
        )
        sub0 = (
            problem.initial_subgradient(x)
            if initial_subgradient is None
            else check_vector(initial_subgradient, dim=problem.dim)
        )
        records = [_state_record(problem, 0, x, sub0)]
        records[0].B = 0.0
        v = x.copy()
        B = 0.0
        stop_reason = "max_iterations"
        inner_cfg = self._inner_config()
        while True:
            rec = records[-1]
            if F_star is not None and rec.F_value - F_star <= eps:
                stop_reason = "f_gap_tolerance"
                break
            if self.grad_tolerance > 0.0 and rec.g_norm <= self.grad_tolerance:
                stop_reason = "grad_tolerance"
                break
            if rec.k >= self.max_iterations:
                break
            k = rec.k
            b_next = (k + 1) ** 2 / (9.0 * L2f)
            B_next = B + b_next
            inner_problem = _contracted_problem(problem, phi, rec.x, v, b_next, B_next)
            solver = GradRegNewton(
                H="auto",
                grad_tolerance=delta,
                max_iterations=self.inner_basic_max_iterations,
                smooth_mode=self.smooth_mode,
                cg_tol=self.cg_tol,
                inner_tol_abs=inner_cfg.tol_abs,
                inner_tol_rel=inner_cfg.tol_rel,
                inner_max_iterations=inner_cfg.max_iterations,
            )
            solver.fit(inner_problem, x0=v)
            if solver.stop_reason_ != "grad_tolerance":
                raise NumericError(
                    f"inner basic run hit its iteration cap at outer iteration {k}"
                )
            v = solver.x_
            x = (b_next * v + B * rec.x) / B_next
            rec.A = None
            rec.b = b_next
            rec.B = B
            rec.H_used = None
            rec.inner_iterations = solver.n_iter_
            rec.inner_residual = solver.g_norm_
            rec.step_norm = problem.norms.primal(x - rec.x)
            new_rec = _state_record(
                problem, k + 1, x, problem.initial_subgradient(x, strict=False)
            )
            new_rec.B = B_next
            new_rec.v = v.copy()
            records.append(new_rec)
            B = B_next
        trace = Trace(header=header, records=records)
        trace.summary = {
            "stop_reason": stop_reason,
            "n_iterations": len(records) - 1,
            "converged": stop_reason != "max_iterations",
            "final_g_norm": records[-1].g_norm,
            "final_F_value": records[-1].F_value,
        }
        return self._finalize(trace)


def accel_subgradient_tolerance(eps: float, L2: float) -> float:
    """Inner stopping tolerance delta = (1/(2 * 3^{7/3})) * (eps/L2)^{2/3}."""
    return (eps / L2) ** (2.0 / 3.0) / (2.0 * 3.0 ** (7.0 / 3.0))


def _contracted_problem(
    problem: CompositeProblem,
    phi: CubicProxFunction,
    x_k,
    v_k,
    b_next: float,
    B_next: float,
) -> CompositeProblem:
    """Build h_{k+1} = B f((b x + B_k x_k)/B) + b psi + beta_phi(v_k; .)."""
    anchor = (B_next - b_next) * x_k
    contracted = ContractedOracle(problem.smooth, b_next, B_next, anchor)
    # beta_phi(v_k; x) = phi(x) - <grad phi(v_k), x> + (<grad phi(v_k), v_k> - phi(v_k))
    cube = NormCubeOracle(coef=2.0, dim=problem.dim, center=phi.center)
    tilt = phi.gradient(v_k)
    offset = float(tilt @ v_k) - phi.value(v_k)
    smooth = SumOracle(contracted, TiltedOracle(cube, tilt, offset))
    return CompositeProblem(
        smooth=smooth,
        simple=problem.simple.scaled(b_next),
        scaling=EuclideanScaling(),
        norms=euclidean_norms(),
        name=f"{problem.name}:contracted",
    )


# ---------------------------------------------------------------------------
# Functional wrappers


def run_basic(problem, x0, F0_sub=None, **params) -> Trace:
    return GradRegNewton(**params).fit(problem, x0, initial_subgradient=F0_sub).trace_


def run_line_search(problem, x0, F0_sub=None, **params) -> Trace:
    return (
        GradRegNewtonLineSearch(**params)
        .fit(problem, x0, initial_subgradient=F0_sub)
        .trace_
    )


def run_accelerated(problem, x0, **params) -> Trace:
    return GradRegNewtonAccelerated(**params).fit(problem, x0).trace_


def reference_solve(
    problem: CompositeProblem,
    x0=None,
    grad_tolerance: float = 1e-12,
    max_iterations: int = 5_000,
) -> tuple[float, PrimalVector]:
    """High-accuracy solve used to pin F* for the rate certificates.

    Runs the line-search method (no curvature constant needed) with tight
    inner tolerances until the selected subgradient's dual norm falls below
    ``grad_tolerance``; raises :class:`NumericError` if it cannot.
    """
    L2 = problem.smooth.lips_hessian
    solver = GradRegNewtonLineSearch(
        H0=max(L2 / 8.0, 1e-10),
        grad_tolerance=grad_tolerance,
        max_iterations=max_iterations,
        inner_tol_abs=min(1e-14, grad_tolerance / 10.0),
        inner_tol_rel=1e-10,
        inner_max_iterations=200_000,
    )
    solver.fit(problem, x0=x0)
    if solver.stop_reason_ != "grad_tolerance":
        raise NumericError(
            f"reference solve stalled at subgradient norm {solver.g_norm_:.3e}"
        )
    return float(solver.F_), solver.x_
