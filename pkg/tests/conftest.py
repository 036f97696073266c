import numpy as np
import pytest

import grnewton as gn


@pytest.fixture(scope="session")
def logistic_small():
    problem = gn.build_instance("logistic", seed=3, m=120, n=30, ridge=1e-3)
    F_star, x_star = gn.reference_solve(problem, x0=np.zeros(30))
    return problem.with_reference(F_star, x_star)


@pytest.fixture(scope="session")
def logistic_big():
    problem = gn.build_instance("logistic", seed=3, m=500, n=100, ridge=1e-3)
    F_star, x_star = gn.reference_solve(problem, x0=np.zeros(100))
    return problem.with_reference(F_star, x_star)


@pytest.fixture(scope="session")
def log_sum_exp_problem():
    problem = gn.build_instance("log_sum_exp", seed=0, m=40, n=15, tau=1.5)
    F_star, x_star = gn.reference_solve(problem, x0=np.zeros(15))
    return problem.with_reference(F_star, x_star)


@pytest.fixture(scope="session")
def l1_quadratic_problem():
    problem = gn.build_instance("l1_quadratic", seed=5, n=30, lam=0.5)
    F_star, x_star = gn.reference_solve(problem, x0=np.zeros(30))
    return problem.with_reference(F_star, x_star)


@pytest.fixture(scope="session")
def cubic_regression_problem():
    return gn.build_instance("cubic_regression", seed=11)


@pytest.fixture(scope="session")
def shipped_suite(logistic_small, log_sum_exp_problem, l1_quadratic_problem):
    """The default instance suite, with references where the tests need them."""
    return [
        gn.build_instance("quad_1d"),
        logistic_small,
        log_sum_exp_problem,
        l1_quadratic_problem,
        gn.build_instance("box_quadratic", seed=7, n=10),
        gn.build_instance("cubic_uc", seed=0, n=15, sigma3=1.0),
        gn.build_instance("weighted_quadratic", seed=2, n=15),
        gn.build_instance("cubic_regression", seed=11),
    ]


def feasible_point(problem, rng, radius=1.5):
    """A random point inside dom psi (strictly, for indicator parts)."""
    x = radius * rng.standard_normal(problem.dim)
    if problem.simple.kind == "box":
        lo, hi = problem.simple._expand(x)
        span = hi - lo
        x = lo + 0.1 * span + 0.8 * span * rng.random(problem.dim)
    return x
