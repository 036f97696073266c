"""Acceptance gate: one test per shipped guarantee, each printing a verdict.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines. Tolerances are fixed here, not calibrated: single-step bounds carry
relative slack at most 1e-6, the per-step progress bound 1e-8, whole-trace
bounds 1e-6 (all on top of recorded inner-solver residuals and a rounding
noise model).
"""

import math

import numpy as np

import grnewton as gn
from grnewton.certificates import (
    FAIL,
    PASS,
    TraceConstants,
    check_b_growth,
    check_doubling_budget,
    check_h_bounds,
    step_certificates,
)
from grnewton.solvers import _fill_step_fields, _state_record
from conftest import feasible_point

STEP_BOUND_NAMES = (
    "step_size",
    "regularization_bound",
    "subgradient_norm",
    "subgradient_contraction",
    "cubic_upper_bound",
    "step_decrease",
)


def report(num, label, ok, detail=""):
    verdict = "PASS" if ok else "FAIL"
    print(f"acceptance {num:>2} {label}: {verdict}  {detail}")
    assert ok, f"criterion {num} ({label}) failed: {detail}"


def armed_h(problem):
    L2 = problem.smooth.lips_hessian
    return max(4.5 * problem.scaling.sigma * L2, L2, 1e-12)


def test_criterion_01_single_step_bounds(shipped_suite):
    rng = np.random.default_rng(101)
    checked = 0
    failures = []
    for problem in shipped_suite:
        header = {
            "mode": "basic",
            "sigma": problem.scaling.sigma,
            "problem": problem.describe(),
            "H": armed_h(problem),
        }
        consts = TraceConstants.from_header(header)
        H = armed_h(problem)
        per_instance = max(1, 500 // len(shipped_suite) + 1)
        for _ in range(per_instance):
            x_bar = feasible_point(problem, rng)
            sub = problem.initial_subgradient(x_bar, strict=False)
            g = problem.norms.dual(sub)
            if g == 0.0:
                continue
            A = gn.regularization_parameter(g, H, problem.scaling.sigma)
            step = gn.solve_step(problem, x_bar, A)
            prev = _state_record(problem, 0, x_bar, sub)
            cur = _state_record(problem, 1, step.T, step.selected_subgradient)
            _fill_step_fields(prev, A, H, 0, step)
            certs = {c.name: c for c in step_certificates(prev, cur, consts)}
            for name in STEP_BOUND_NAMES:
                if certs[name].verdict != PASS:
                    failures.append((problem.name, name, certs[name]))
            if not gn.model_lower_bound_check(step, problem, x_bar, A, x_bar):
                failures.append((problem.name, "model_lower_bound", None))
            checked += 1
    report(
        1,
        "single-step bounds on random steps",
        checked >= 500 and not failures,
        f"{checked} steps, failures: {failures[:3]}",
    )


def test_criterion_02_progress_every_iteration(
    logistic_big, log_sum_exp_problem, l1_quadratic_problem
):
    bad = []
    for problem in (logistic_big, log_sum_exp_problem, l1_quadratic_problem):
        trace = gn.run_basic(
            problem, np.zeros(problem.dim), grad_tolerance=1e-9, max_iterations=3000
        )
        consts = TraceConstants.from_header(trace.header)
        for prev, cur in zip(trace.records[:-1], trace.records[1:]):
            certs = {c.name: c for c in step_certificates(prev, cur, consts)}
            if certs["cubic_upper_bound"].verdict != PASS:
                bad.append((problem.name, prev.k, "cubic_upper_bound"))
            if "progress" in certs and certs["progress"].verdict != PASS:
                bad.append((problem.name, prev.k, "progress"))
    report(2, "per-step progress bound on every iteration", not bad, str(bad[:3]))


def test_criterion_03_global_rate_and_budget(logistic_big, log_sum_exp_problem):
    issues = []
    for problem in (logistic_big, log_sum_exp_problem):
        trace = gn.run_basic(
            problem, np.zeros(problem.dim), grad_tolerance=1e-11, max_iterations=3000
        )
        for eps in (1e-3, 1e-6):
            for cert in (
                gn.check_functional_rate(trace, eps),
                gn.check_iteration_budget(trace, eps),
            ):
                if cert.verdict != PASS:
                    issues.append((problem.name, eps, cert.name))
        # empirical O(k^-2): F_k * k^2 bounded by the rate constant
        consts = TraceConstants.from_header(trace.header)
        c = consts.contraction_factor()
        D_hat = trace.d_hat()
        gaps = trace.F_values - trace.F_star
        ks = np.arange(len(gaps))
        bound = 64.0 / 3.0 * c**4 * consts.H * D_hat**3
        worst = float(np.max(gaps[1:] * ks[1:] ** 2))
        if worst > bound * (1.0 + 1e-6):
            issues.append((problem.name, "k2_bound", worst, bound))
    report(3, "global rate, budget, and O(1/k^2) decay", not issues, str(issues[:3]))


def test_criterion_04_hand_trace():
    p = gn.build_instance("quad_1d")
    trace = gn.run_basic(p, x0=[1.0], H=3.0, grad_tolerance=0.0, max_iterations=2)
    x2 = 0.5 - 0.5 / (1.0 + np.sqrt(0.5))
    ok = (
        abs(trace.records[1].x[0] - 0.5) <= 1e-12
        and abs(trace.records[1].g_norm - 0.5) <= 1e-12
        and abs(trace.records[2].x[0] - x2) <= 1e-12
    )
    report(4, "scalar hand trace to 1e-12", ok, f"x2={trace.records[2].x[0]!r}")


def test_criterion_05_linear_rate_uniformly_convex():
    rng = np.random.default_rng(105)
    issues = []
    for sigma3 in (0.1, 1.0, 10.0):
        p = gn.build_instance("cubic_uc", seed=0, n=15, sigma3=sigma3)
        H = 3.0 * p.scaling.sigma * p.smooth.lips_hessian
        x0 = rng.standard_normal(15)
        trace = gn.run_basic(p, x0, H=H, grad_tolerance=1e-13, max_iterations=400)
        cert = gn.check_linear_rate_uc(trace)
        if cert.verdict != PASS:
            issues.append((sigma3, "certificate"))
        # measured average contraction beats the certified factor
        gaps = trace.F_values - trace.F_star
        floor = max(1e-13 * gaps[0], 1e-300)
        K = int(np.max(np.nonzero(gaps >= floor)[0]))
        measured = (gaps[K] / gaps[0]) ** (1.0 / K)
        certified = math.exp(-cert.details["rate"])
        if measured > certified * (1.0 + 1e-6):
            issues.append((sigma3, "contraction", measured, certified))
    report(5, "linear rate under cubic lower growth", not issues, str(issues[:3]))


def test_criterion_06_superlinear_region():
    p = gn.build_instance("cubic_uc", seed=0, n=15, sigma3=1.0)
    mu = p.smooth.strong_convexity_mu
    H = armed_h(p)
    c = 1.0 + 1.5 * p.smooth.lips_hessian / H
    region = 3.0 * mu**2 / (4.0 * H * c**2)
    rng = np.random.default_rng(106)
    u = rng.standard_normal(15)
    x0 = 0.01 * u / np.linalg.norm(u)
    trace = gn.run_basic(p, x0, H=H, grad_tolerance=1e-13, max_iterations=40)
    g = trace.g_norms
    ok_start = g[0] <= region
    consts = TraceConstants.from_header(trace.header)
    per_step_ok = all(
        cert.verdict == PASS
        for prev, cur in zip(trace.records[:-1], trace.records[1:])
        for cert in step_certificates(prev, cur, consts)
        if cert.name == "superlinear"
    )
    entered = int(np.nonzero(g <= region)[0][0])
    below = np.nonzero(g < 1e-12)[0]
    fast = len(below) > 0 and below[0] - entered <= 6
    report(
        6,
        "superlinear recursion inside the region",
        ok_start and per_step_ok and fast,
        f"g0={g[0]:.2e} region={region:.2e} reached 1e-12 at k={below[0] if len(below) else None}",
    )


def test_criterion_07_line_search_bounds(
    logistic_small, log_sum_exp_problem, l1_quadratic_problem
):
    runs = [
        (logistic_small, np.zeros(logistic_small.dim), 1e-6),
        (logistic_small, np.full(logistic_small.dim, 3.0), 1e-6),
        (log_sum_exp_problem, np.zeros(log_sum_exp_problem.dim), 1e-4),
        (l1_quadratic_problem, np.zeros(l1_quadratic_problem.dim), 1e-4),
        (gn.build_instance("weighted_quadratic", seed=2, n=15), None, 3.0),
    ]
    issues = []
    for problem, x0, H0 in runs:
        if x0 is None:
            x0 = np.zeros(problem.dim)
        trace = gn.run_line_search(
            problem, x0, H0=H0, grad_tolerance=1e-10, max_iterations=2000
        )
        L2 = problem.smooth.lips_hessian
        cap = max(H0, L2)
        total_doublings = 0
        for rec in trace.records:
            if rec.H_used is None:
                continue
            Hk = rec.H_used / 2.0**rec.i_k
            total_doublings += rec.i_k
            if not (H0 * (1 - 1e-12) <= Hk <= cap * (1 + 1e-12)):
                issues.append((problem.name, rec.k, "H_k out of range"))
            if rec.H_used > 2.0 * cap * (1 + 1e-12):
                issues.append((problem.name, rec.k, "trial H out of range"))
        K = trace.n_iterations
        if total_doublings > 2 * K + math.log2(cap / H0) + 2.0:
            issues.append((problem.name, "doubling budget", total_doublings, K))
        if check_h_bounds(trace).verdict == FAIL:
            issues.append((problem.name, "h_bounds"))
        if check_doubling_budget(trace).verdict == FAIL:
            issues.append((problem.name, "doubling_budget"))
        if trace.F_star is not None:
            for eps in (1e-3, 1e-6):
                cert = gn.check_line_search_budget(trace, eps)
                if cert.verdict != PASS:
                    issues.append((problem.name, eps, "budget"))
    report(7, "line-search H bounds and budget", not issues, str(issues[:3]))


def test_criterion_08_gradient_norm_complexity(logistic_small):
    issues = []
    for delta in (1e-2, 1e-4):
        trace = gn.run_basic(
            logistic_small,
            np.zeros(logistic_small.dim),
            grad_tolerance=delta,
            max_iterations=3000,
        )
        cert = gn.check_gradient_complexity(trace)
        if cert.verdict != PASS:
            issues.append(("logistic", delta, cert.verdict))
    p = gn.build_instance("cubic_uc", seed=0, n=15, sigma3=1.0)
    rng = np.random.default_rng(108)
    x0 = rng.standard_normal(15)
    for delta in (1e-2, 1e-4):
        trace = gn.run_basic(p, x0, grad_tolerance=delta, max_iterations=3000)
        for cert in (
            gn.check_gradient_complexity(trace),
            gn.check_gradient_complexity_uc(trace),
        ):
            if cert.verdict != PASS:
                issues.append(("cubic_uc", delta, cert.name, cert.verdict))
    report(8, "subgradient-norm step-count bounds", not issues, str(issues[:3]))


def test_criterion_09_acceleration(cubic_regression_problem):
    problem = cubic_regression_problem
    F_star, x_star = problem.reference_optimum
    x0 = np.zeros(problem.dim)
    eps = 1e-6
    accel = gn.GradRegNewtonAccelerated(f_gap_tolerance=eps, max_iterations=1000)
    accel.fit(problem, x0)
    trace = accel.trace_
    budget = gn.check_accel_budget(trace)
    growth = check_b_growth(trace)
    gaps = trace.F_values - F_star
    ks = np.arange(len(gaps))
    L2 = trace.header["L2_f"]
    beta = gn.prox_function_beta(x0, x_star)
    k3_bound = 54.0**1.5 * L2 * beta
    k3_worst = float(np.max(gaps[1:] * ks[1:] ** 3.0))
    basic = gn.GradRegNewton(
        grad_tolerance=0.0, f_gap_tolerance=eps, max_iterations=5000
    ).fit(problem, x0)
    ok = (
        budget.verdict == PASS
        and growth.verdict == PASS
        and accel.stop_reason_ == "f_gap_tolerance"
        and k3_worst <= k3_bound * (1.0 + 1e-6)
        and basic.stop_reason_ == "f_gap_tolerance"
        and accel.n_iter_ < basic.n_iter_
    )
    report(
        9,
        "accelerated budget, O(1/k^3) decay, and outer-count win",
        ok,
        f"outer={accel.n_iter_} (budget {budget.rhs:.0f}) vs basic={basic.n_iter_}; "
        f"max F k^3 = {k3_worst:.3g} <= {k3_bound:.3g}",
    )


def test_criterion_10_oracle_hygiene(shipped_suite):
    rng = np.random.default_rng(110)
    eps = 1e-6
    issues = []
    for problem in shipped_suite:
        f = problem.smooth
        for _ in range(50):
            x = feasible_point(problem, rng)
            h = rng.standard_normal(problem.dim)
            fd = (f.value(x + eps * h) - f.value(x - eps * h)) / (2.0 * eps)
            exact = float(f.gradient(x) @ h)
            if abs(fd - exact) > 1e-5 * (1.0 + abs(exact)):
                issues.append((problem.name, "gradient"))
        for _ in range(20):
            x = feasible_point(problem, rng)
            h = rng.standard_normal(problem.dim)
            fd = (f.gradient(x + eps * h) - f.gradient(x - eps * h)) / (2.0 * eps)
            exact = f.hessian(x).apply(h)
            if np.linalg.norm(fd - exact) > 1e-4 * (1.0 + np.linalg.norm(exact)):
                issues.append((problem.name, "hessian"))
    for problem in shipped_suite:
        if problem.simple.kind != "zero" or not problem.scaling.quadratic:
            continue
        x_bar = feasible_point(problem, rng)
        g = problem.norms.dual(problem.smooth.gradient(x_bar))
        if g == 0.0:
            continue
        A = gn.regularization_parameter(g, armed_h(problem), problem.scaling.sigma)
        direct = gn.solve_step_smooth(problem, x_bar, A, mode="direct")
        via_cg = gn.solve_step_smooth(problem, x_bar, A, mode="cg", cg_tol=1e-12)
        if np.linalg.norm(direct.T - via_cg.T) > 10.0 * 1e-12 * (
            1.0 + np.linalg.norm(direct.T)
        ):
            issues.append((problem.name, "direct vs cg"))
    report(10, "oracle hygiene and solver agreement", not issues, str(issues[:3]))


def test_criterion_11_determinism(tmp_path):
    from grnewton.cli import main

    manifest = tmp_path / "suite.toml"
    manifest.write_text(
        """
seed = 3

[[instances]]
name = "quad"
kind = "quad_1d"
x0 = [1.0]

[[instances]]
name = "logi"
kind = "logistic"
reference = "solve"
[instances.params]
m = 60
n = 12

[[solvers]]
mode = "basic"

[[solvers]]
mode = "line_search"
H0 = 0.01
""",
        encoding="ascii",
    )
    outs = []
    for tag in ("r1", "r2"):
        out = tmp_path / tag
        assert main(["run", "--manifest", str(manifest), "--out", str(out)]) == 0
        assert main(["certify", str(out)]) == 0
        outs.append(out)
    identical = True
    names = sorted(p.name for p in outs[0].glob("*.jsonl"))
    assert names
    for name in names:
        if (outs[0] / name).read_bytes() != (outs[1] / name).read_bytes():
            identical = False
    report(11, "byte-identical traces and reports", identical, f"{len(names)} files")
