"""Optional baseline: Newton's method with cubic regularization.

Kept for side-by-side comparisons only; it carries no certificates. Each
iteration minimizes the second-order model plus (M/6)||y - x||^3 in the
Euclidean norm (psi = 0), via the standard one-dimensional secular equation
on the Hessian eigendecomposition.
"""

from __future__ import annotations

import numpy as np

from .exceptions import InvalidInputError, NumericError
from .problems import CompositeProblem
from .validation import check_scalar, check_vector


def cubic_model_minimizer(H: np.ndarray, g: np.ndarray, M: float) -> np.ndarray:
    """argmin_s <g, s> + <H s, s>/2 + (M/6) ||s||^3 for symmetric H >= 0.

    With eigendecomposition H = V diag(lam) V^T the minimizer satisfies
    (H + (M/2) r I) s = -g where r = ||s||, and r solves the scalar
    equation r = ||(H + (M/2) r I)^{-1} g||, found by bisection.
    """
    M = check_scalar(M, "M", positive=True)
    lam, V = np.linalg.eigh(H)
    gt = V.T @ g

    def step_norm(r: float) -> float:
        return float(np.linalg.norm(gt / (lam + 0.5 * M * r)))

    lo, hi = 0.0, 1.0
    for _ in range(200):
        if step_norm(hi) <= hi:
            break
        hi *= 2.0
    else:
        raise NumericError("cubic model minimizer did not bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if step_norm(mid) > mid:
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    return V @ (-gt / (lam + 0.5 * M * r))


def run_cubic_newton(
    problem: CompositeProblem,
    x0,
    M: float,
    grad_tolerance: float = 1e-9,
    max_iterations: int = 500,
) -> dict:
    """Cubic-regularized Newton baseline for smooth Euclidean problems.

    Returns a plain dict: final point, gradient norms, objective values,
    iteration count. No trace, no certificates.
    """
    if problem.simple.kind != "zero" or problem.norms.kind != "euclidean":
        raise InvalidInputError("the baseline supports psi = 0 in the Euclidean setup")
    x = check_vector(x0, dim=problem.dim, name="x0")
    g_norms, values = [], []
    for k in range(max_iterations + 1):
        g = problem.smooth.gradient(x)
        g_norms.append(float(np.linalg.norm(g)))
        values.append(problem.smooth.value(x))
        if g_norms[-1] <= grad_tolerance:
            break
        s = cubic_model_minimizer(problem.smooth.hessian(x).matrix, g, M)
        x = x + s
    return {
        "x": x,
        "g_norms": np.array(g_norms),
        "values": np.array(values),
        "n_iterations": len(g_norms) - 1,
        "converged": g_norms[-1] <= grad_tolerance,
    }
