"""Named benchmark instances, shared by the CLI manifest loader and tests.

Every builder is deterministic in its ``seed``; instances with an analytic
optimum carry it as the reference so rate certificates arm without an
extra solve.
"""

from __future__ import annotations

import numpy as np

from .datasets import load_libsvm, synthetic_classification
from .exceptions import InvalidInputError
from .linalg import euclidean_norms
from .problems import (
    CompositeProblem,
    QuadraticOracle,
    make_box_quadratic,
    make_cubic_regression,
    make_cubic_uc,
    make_l1_quadratic,
    make_log_sum_exp,
    make_logistic,
    logistic_lips_bound,
    zero_part,
)
from .scaling import EuclideanScaling, WeightedScaling


def random_psd(n: int, cond: float = 50.0, seed: int = 0) -> np.ndarray:
    """Random symmetric positive definite matrix with given condition number."""
    rng = np.random.default_rng(seed)
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    spectrum = np.logspace(0.0, -np.log10(cond), n)
    return (V * spectrum) @ V.T


def _quad_1d(seed: int = 0) -> CompositeProblem:
    problem = CompositeProblem(
        smooth=QuadraticOracle(np.array([[1.0]])),
        simple=zero_part(),
        scaling=EuclideanScaling(),
        norms=euclidean_norms(),
        name="quad_1d",
    )
    return problem.with_reference(0.0, np.zeros(1))


def _logistic(
    seed: int = 0,
    m: int = 200,
    n: int = 40,
    ridge: float = 1e-3,
    collinear: float = 0.0,
    collinear_noise: float = 1e-2,
    lips="analytic",
    dataset: str | None = None,
    scale: float | None = None,
    anchored: bool = False,
    anchor_scale: float = 1.0,
) -> CompositeProblem:
    if dataset is not None:
        data = load_libsvm(dataset)
    else:
        # Unit-norm rows keep the analytic Hessian-Lipschitz bound usable.
        scale = 1.0 / np.sqrt(n) if scale is None else scale
        data = synthetic_classification(
            m,
            n,
            seed=seed,
            collinear_fraction=collinear,
            collinear_noise=collinear_noise,
            scale=scale,
        )
    lips_value = None
    if lips == "analytic":
        lips_value = logistic_lips_bound(data)
    elif lips != "sampled" and lips is not None:
        lips_value = float(lips)
    optimum_at = None
    if anchored:
        rng = np.random.default_rng(seed + 1)
        optimum_at = anchor_scale * rng.standard_normal(data.n_features)
    return make_logistic(
        data,
        ridge_mu=ridge,
        lips_hessian=lips_value,
        optimum_at=optimum_at,
        l2_seed=seed,
        name="logistic",
    )


def _log_sum_exp(
    seed: int = 0, m: int = 60, n: int = 25, tau: float = 1.0, lips=None
) -> CompositeProblem:
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    lips_value = None if lips in (None, "analytic") else float(lips)
    return make_log_sum_exp(A, b, tau, lips_hessian=lips_value)


def _l1_quadratic(
    seed: int = 0, n: int = 40, lam: float = 0.5, cond: float = 50.0
) -> CompositeProblem:
    rng = np.random.default_rng(seed)
    Q = random_psd(n, cond=cond, seed=seed)
    b = rng.standard_normal(n)
    return make_l1_quadratic(Q, b, lam)


def _box_quadratic(seed: int = 0, n: int = 12, cond: float = 20.0) -> CompositeProblem:
    rng = np.random.default_rng(seed)
    Q = random_psd(n, cond=cond, seed=seed)
    b = 2.0 * rng.standard_normal(n)
    return make_box_quadratic(Q, b, lo=-np.ones(n), hi=2.0 * np.ones(n))


def _cubic_uc(
    seed: int = 0, n: int = 20, sigma3: float = 1.0, q: str = "identity"
) -> CompositeProblem:
    if q == "identity":
        Q = np.eye(n)
    elif q == "zero":
        Q = np.zeros((n, n))
    elif q == "random":
        Q = random_psd(n, cond=30.0, seed=seed)
    else:
        raise InvalidInputError(f"unknown q kind {q!r}")
    return make_cubic_uc(Q, sigma3)


def _weighted_quadratic(
    seed: int = 0, n: int = 20, cond: float = 30.0, w_min: float = 0.25
) -> CompositeProblem:
    """Quadratic with a weighted scaling function: exercises sigma < 1."""
    rng = np.random.default_rng(seed)
    Q = random_psd(n, cond=cond, seed=seed)
    b = rng.standard_normal(n)
    weights = np.linspace(w_min, 1.0, n)
    oracle = QuadraticOracle(Q, b)
    x_star = np.linalg.solve(Q, b)
    problem = CompositeProblem(
        smooth=oracle,
        simple=zero_part(),
        scaling=WeightedScaling(weights),
        norms=euclidean_norms(),
        name="weighted_quadratic",
        params={"n": n, "w_min": w_min},
    )
    return problem.with_reference(oracle.value(x_star), x_star)


def synthetic_cubic_regression(
    seed: int = 0,
    n: int = 16,
    n_active: int = 4,
    m_extra: int = 24,
    t: float = 0.5,
    big_rows: int = 4,
    big_scale: float = 1.5,
    small_scale: float = 0.2,
) -> CompositeProblem:
    """Cubic residual fit with a known, degenerate optimum.

    Each active direction appears as a duplicated row with residuals +t and
    -t at the planted point, so their cubed residuals cancel in the
    gradient; the remaining rows have zero residual there. The Hessian at
    the optimum therefore has rank n_active < n, which keeps the basic
    method in its slow global phase and makes the instance a fair
    accelerated-vs-basic comparison.
    """
    rng = np.random.default_rng(seed)
    x_star = rng.standard_normal(n)
    active = rng.standard_normal((n_active, n))
    active /= np.linalg.norm(active, axis=1, keepdims=True)
    rows = [active, active]
    resid = [np.full(n_active, t), np.full(n_active, -t)]
    extra = rng.standard_normal((m_extra, n))
    extra /= np.linalg.norm(extra, axis=1, keepdims=True)
    scales = np.full(m_extra, small_scale)
    scales[:big_rows] = big_scale
    extra *= scales[:, None]
    rows.append(extra)
    resid.append(np.zeros(m_extra))
    A = np.vstack(rows)
    r = np.concatenate(resid)
    b = A @ x_star - r
    if np.linalg.matrix_rank(A) < n:
        raise InvalidInputError("cubic regression rows do not span the space")
    problem = make_cubic_regression(A, b, name="cubic_regression")
    return problem.with_reference(problem.smooth.value(x_star), x_star)


_REGISTRY = {
    "quad_1d": _quad_1d,
    "logistic": _logistic,
    "log_sum_exp": _log_sum_exp,
    "l1_quadratic": _l1_quadratic,
    "box_quadratic": _box_quadratic,
    "cubic_uc": _cubic_uc,
    "weighted_quadratic": _weighted_quadratic,
    "cubic_regression": synthetic_cubic_regression,
}


def instance_kinds() -> list[str]:
    return sorted(_REGISTRY)


def build_instance(kind: str, seed: int = 0, **params) -> CompositeProblem:
    """Construct a named benchmark instance deterministically."""
    try:
        builder = _REGISTRY[kind]
    except KeyError:
        raise InvalidInputError(
            f"unknown instance kind {kind!r}; available: {', '.join(instance_kinds())}"
        ) from None
    problem = builder(seed=seed, **params)
    if not problem.name:
        problem.name = kind
    return problem


def default_suite(seed: int = 0) -> list[CompositeProblem]:
    """The shipped instance suite used by the acceptance checks."""
    return [
        build_instance("quad_1d", seed=seed),
        build_instance("logistic", seed=seed, m=120, n=30, ridge=1e-3),
        build_instance("log_sum_exp", seed=seed, m=40, n=15, tau=1.5),
        build_instance("l1_quadratic", seed=seed, n=30, lam=0.5),
        build_instance("box_quadratic", seed=seed, n=10),
        build_instance("cubic_uc", seed=seed, n=15, sigma3=1.0),
        build_instance("weighted_quadratic", seed=seed, n=15),
        build_instance("cubic_regression", seed=seed),
    ]
