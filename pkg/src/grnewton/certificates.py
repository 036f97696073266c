"""Runtime certificates: inequality checks evaluated on recorded traces.

Every certificate is a pure function of trace scalars plus declared
constants, so re-certifying a stored trace is deterministic and
bit-identical to the in-run evaluation. Each check reports lhs, rhs and the
total slack it allowed; the verdict is ``pass`` iff ``lhs <= rhs + slack``
when the check's hypotheses are armed.

Slack policy: multiplicative 1e-6 on whole-trace (rate/budget) bounds,
1e-8 on single-step bounds (1e-6 for the subgradient-norm pair, 1e-10 for
the cubic upper bound), plus absolute terms that account for the recorded
inner-solver residual (inexact composite steps) and a floating-point noise
model built from the magnitudes entering each inequality.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidInputError
from .trace import IterationRecord, Trace

EPS = float(np.finfo(np.float64).eps)

PASS = "pass"
FAIL = "fail"
NOT_ARMED = "not-armed"

# Relative slacks, pinned once for the whole build.
STEP_SLACK = 1e-8
GNORM_SLACK = 1e-6
CUBIC_UPPER_SLACK = 1e-10
MODEL_DECREASE_SLACK = 1e-10
TRACE_SLACK = 1e-6
EXACT_SLACK = 1e-12


@dataclass
class Certificate:
    """One checked inequality: lhs <= rhs + slack."""

    name: str
    anchor: str
    lhs: float
    rhs: float
    slack: float
    verdict: str
    armed_conditions: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "verdict": self.verdict,
            "armed_conditions": self.armed_conditions,
            "details": self.details,
        }


def _cert(
    name: str,
    anchor: str,
    lhs: float,
    rhs: float,
    slack: float,
    armed: bool = True,
    armed_conditions: str = "",
    details: dict | None = None,
) -> Certificate:
    if not armed:
        verdict = NOT_ARMED
    else:
        verdict = PASS if lhs <= rhs + slack else FAIL
    return Certificate(
        name=name,
        anchor=anchor,
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(slack),
        verdict=verdict,
        armed_conditions=armed_conditions,
        details=details or {},
    )


@dataclass
class TraceConstants:
    """Declared constants a trace was run with."""

    sigma: float
    L2: float
    mode: str
    H: float | None = None
    H0: float | None = None
    mu: float = 0.0
    sigma3: float = 0.0
    F_star: float | None = None
    grad_tolerance: float | None = None
    f_gap_tolerance: float | None = None

    @classmethod
    def from_header(cls, header: dict) -> "TraceConstants":
        problem = header.get("problem", {})
        return cls(
            sigma=float(header.get("sigma", 1.0)),
            L2=float(problem.get("lips_hessian", header.get("L2", 0.0))),
            mode=header.get("mode", "basic"),
            H=header.get("H"),
            H0=header.get("H0"),
            mu=float(problem.get("strong_convexity_mu", 0.0)),
            sigma3=float(problem.get("uniform_convexity_sigma3", 0.0)),
            F_star=header.get("F_star"),
            grad_tolerance=header.get("grad_tolerance"),
            f_gap_tolerance=header.get("f_gap_tolerance"),
        )

    def contraction_factor(self, H: float | None = None) -> float:
        """c = 1/sigma + 3 L2 / (2 H) for the H actually used."""
        H = self.H if H is None else H
        if H is None or H <= 0.0:
            raise InvalidInputError("contraction factor needs a positive H")
        if self.L2 == 0.0:
            return 1.0 / self.sigma
        return 1.0 / self.sigma + 1.5 * self.L2 / H


# ---------------------------------------------------------------------------
# Single-step certificates


def step_certificates(
    prev: IterationRecord, cur: IterationRecord, consts: TraceConstants
) -> list[Certificate]:
    """All per-step checks for the step prev -> cur.

    Pure in the two records plus the declared constants; the solvers call
    this during the run and ``certify_trace`` recomputes it offline.
    """
    sigma, L2 = consts.sigma, consts.L2
    A, Hu = prev.A, prev.H_used
    if A is None or Hu is None:
        return []
    s = prev.step_norm or 0.0
    r = prev.inner_residual or 0.0
    g0, g1 = prev.g_norm, cur.g_norm
    noise_g = 8.0 * ((prev.fp_noise or 0.0) + EPS * (g0 + g1))
    lin = prev.lin_term or 0.0
    quad = prev.quad_term or 0.0
    breg = prev.breg or 0.0
    value_noise = 8.0 * EPS * (
        1.0 + abs(prev.F_value) + abs(cur.F_value) + abs(lin) + abs(quad) + A * breg
    )
    c_used = consts.contraction_factor(Hu)
    certs: list[Certificate] = []

    # Model value never exceeds the current objective value.
    certs.append(
        _cert(
            "model_decrease",
            "M_A(x, T) <= F(x)",
            prev.model_value if prev.model_value is not None else -np.inf,
            prev.F_value,
            MODEL_DECREASE_SLACK * (1.0 + abs(prev.F_value)) + value_noise,
        )
    )

    # Step-size bound from the model's strong convexity.
    if A > 0.0:
        inexact = r / (sigma * A)
        certs.append(
            _cert(
                "step_size",
                "|T - x| <= |F'(x)|_* / (sigma A)",
                s,
                g0 / (sigma * A),
                STEP_SLACK * g0 / (sigma * A) + inexact + EPS * (1.0 + s),
            )
        )
        certs.append(
            _cert(
                "regularization_bound",
                "H |T - x| <= 3 sigma A",
                Hu * s,
                3.0 * sigma * A,
                STEP_SLACK * 3.0 * sigma * A + Hu * inexact + EPS * Hu * (1.0 + s),
            )
        )
        # Norm of the selected subgradient at the new point.
        gn1_rhs = sigma * A * c_used * s
        gn1_slack = GNORM_SLACK * gn1_rhs + noise_g
        if g0 > 0.0:
            gn1_slack += sigma * A * s * 1.5 * (L2 / Hu) * (r / g0)
        certs.append(
            _cert(
                "subgradient_norm",
                "|F'(T)|_* <= sigma A c |T - x|",
                g1,
                gn1_rhs,
                gn1_slack,
            )
        )
        certs.append(
            _cert(
                "subgradient_contraction",
                "|F'(T)|_* <= c |F'(x)|_*",
                g1,
                c_used * g0,
                GNORM_SLACK * c_used * g0 + noise_g + 2.0 * c_used * r,
            )
        )

    # Cubic upper bound at the accepted step (the line-search test).
    cubic_rhs = prev.f_value + lin + 0.5 * quad + (Hu / 6.0) * s**3
    cubic_slack = CUBIC_UPPER_SLACK * (1.0 + abs(prev.f_value)) + value_noise
    cubic = _cert(
        "cubic_upper_bound",
        "f(T) <= f(x) + <g, d> + <Hd, d>/2 + H |d|^3 / 6",
        cur.f_value,
        cubic_rhs,
        cubic_slack,
    )
    certs.append(cubic)
    ftup_ok = cubic.verdict == PASS

    # Guaranteed decrease and the per-step progress inequality.
    decrease = prev.F_value - cur.F_value
    certs.append(
        _cert(
            "step_decrease",
            "F(x) - F(T) >= <Hd, d>/2 + sigma A |d|^2 / 2",
            0.5 * quad + 0.5 * sigma * A * s**2,
            decrease,
            STEP_SLACK * (1.0 + abs(prev.F_value)) + value_noise + 2.0 * r * (1.0 + s),
            armed=ftup_ok,
            armed_conditions="cubic upper bound holds at the step",
        )
    )
    if g0 > 0.0:
        prog_lhs = 0.5 / c_used**2 * math.sqrt(3.0 / Hu) * g1**2 / math.sqrt(g0)
        certs.append(
            _cert(
                "progress",
                "F(x) - F(T) >= sqrt(3/H) |F'(T)|^2 / (2 c^2 |F'(x)|^{1/2})",
                prog_lhs,
                decrease,
                STEP_SLACK * (abs(prog_lhs) + abs(decrease))
                + value_noise
                + 2.0 * r * (1.0 + s)
                + noise_g * math.sqrt(g0),
                armed=ftup_ok,
                armed_conditions="cubic upper bound holds at the step",
            )
        )
    certs.append(
        _cert(
            "monotone",
            "F(T) <= F(x)",
            cur.F_value,
            prev.F_value,
            EXACT_SLACK * (1.0 + abs(prev.F_value)) + value_noise + 2.0 * r * (1.0 + s),
            armed=ftup_ok,
            armed_conditions="cubic upper bound holds at the step",
        )
    )

    if consts.mu > 0.0:
        region = 3.0 * consts.mu**2 / (4.0 * Hu * c_used**2)
        rhs = 2.0 * c_used / consts.mu * math.sqrt(Hu / 3.0) * g0**1.5
        certs.append(
            _cert(
                "superlinear",
                "|F'(T)|_* <= (2c/mu) sqrt(H/3) |F'(x)|_*^{3/2}",
                g1,
                rhs,
                GNORM_SLACK * rhs + noise_g + 4.0 * c_used * r,
                armed=ftup_ok,
                armed_conditions="mu > 0 and cubic upper bound holds",
                details={"in_region": bool(g0 <= region), "region_bound": region},
            )
        )
    return certs


# ---------------------------------------------------------------------------
# Whole-trace certificates


def _d_hat(trace: Trace) -> float | None:
    return trace.d_hat()


def _gaps(trace: Trace, F_star: float) -> np.ndarray:
    return trace.F_values - F_star


def _log_theta(F0: float, g0: float, D: float, eps: float) -> float:
    return math.log(F0 * math.sqrt(g0) * math.sqrt(D) / eps**1.5)


def check_functional_rate(
    trace: Trace,
    eps: float,
    F_star: float | None = None,
    D_hat: float | None = None,
    H: float | None = None,
    sigma: float | None = None,
    L2: float | None = None,
) -> Certificate:
    """Whole-trace functional convergence rate for the basic method.

    For every k with F(x_k) - F* >= eps the inverse square root of the gap
    must have grown at least linearly:

        1/sqrt(F_k) >= 1/sqrt(F_0) + sqrt(3/(H D^3)) (k - ln Theta) / (4 c^2)

    with Theta = F_0 g_0^{1/2} D^{1/2} / eps^{3/2} and D the (a-posteriori)
    largest realized distance to the optimum.
    """
    consts = TraceConstants.from_header(trace.header)
    F_star = consts.F_star if F_star is None else F_star
    H = consts.H if H is None else H
    sigma = consts.sigma if sigma is None else sigma
    L2 = consts.L2 if L2 is None else L2
    D_hat = _d_hat(trace) if D_hat is None else D_hat
    name, anchor = "functional_rate", "1/sqrt(F_k - F*) grows linearly in k"
    armed = (
        consts.mode == "basic"
        and F_star is not None
        and D_hat is not None
        and H is not None
        and H >= L2 * (1.0 - EXACT_SLACK)
        and len(trace.records) > 0
    )
    if not armed:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="basic mode, F* known, H >= L2")
    gaps = _gaps(trace, F_star)
    F0 = gaps[0]
    g0 = trace.records[0].g_norm
    if F0 < eps or F0 <= 0.0 or g0 <= 0.0 or D_hat <= 0.0:
        return _cert(name, anchor, 0.0, 0.0, 0.0,
                     armed_conditions="trivially satisfied: F_0 - F* < eps",
                     details={"eps": eps})
    c = 1.0 / sigma + (1.5 * L2 / H if L2 > 0.0 else 0.0)
    coef = math.sqrt(3.0 / (H * D_hat**3)) / (4.0 * c**2)
    log_theta = _log_theta(F0, g0, D_hat, eps)
    worst_margin, worst = math.inf, None
    for k, Fk in enumerate(gaps):
        if Fk < eps:
            break
        bound = 1.0 / math.sqrt(F0) + coef * (k - log_theta)
        value = 1.0 / math.sqrt(Fk)
        slack = TRACE_SLACK * (abs(bound) + abs(value)) + 32.0 * EPS * (k + 1)
        margin = value - bound + slack
        if margin < worst_margin:
            worst_margin, worst = margin, (k, bound, value, slack)
    if worst is None:
        return _cert(name, anchor, 0.0, 0.0, 0.0,
                     armed_conditions="trivially satisfied", details={"eps": eps})
    k, bound, value, slack = worst
    return _cert(name, anchor, bound, value, slack,
                 armed_conditions="basic mode, F* known, H >= L2",
                 details={"eps": eps, "worst_k": k, "D_hat": D_hat})


def check_iteration_budget(
    trace: Trace,
    eps: float,
    F_star: float | None = None,
    D_hat: float | None = None,
    H: float | None = None,
    c: float | None = None,
) -> Certificate:
    """Iteration count above gap eps stays within the basic-method budget:

    k <= 4 c^2 sqrt(H D^3 / (3 eps)) + ln Theta.
    """
    consts = TraceConstants.from_header(trace.header)
    F_star = consts.F_star if F_star is None else F_star
    H = consts.H if H is None else H
    D_hat = _d_hat(trace) if D_hat is None else D_hat
    name, anchor = "iteration_budget", "iterations with F_k - F* >= eps are bounded"
    armed = (
        consts.mode == "basic"
        and F_star is not None
        and D_hat is not None
        and H is not None
        and H >= consts.L2 * (1.0 - EXACT_SLACK)
    )
    if not armed:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="basic mode, F* known, H >= L2")
    if c is None:
        c = consts.contraction_factor(H)
    gaps = _gaps(trace, F_star)
    above = np.nonzero(gaps >= eps)[0]
    if len(above) == 0 or gaps[0] <= 0.0:
        return _cert(name, anchor, 0.0, 1.0, 0.0,
                     armed_conditions="trivially satisfied: F_0 - F* < eps",
                     details={"eps": eps})
    n_above = int(above[-1])
    g0 = trace.records[0].g_norm
    budget = 4.0 * c**2 * math.sqrt(H * D_hat**3 / (3.0 * eps)) + _log_theta(
        gaps[0], g0, D_hat, eps
    )
    return _cert(name, anchor, float(n_above), budget, TRACE_SLACK * abs(budget) + 1.0,
                 armed_conditions="basic mode, F* known, H >= L2",
                 details={"eps": eps, "D_hat": D_hat})


def check_linear_rate_uc(
    trace: Trace,
    F_star: float | None = None,
    sigma3: float | None = None,
    H: float | None = None,
    c: float | None = None,
    g0: float | None = None,
    D_hat: float | None = None,
) -> Certificate:
    """Global linear rate under cubic lower growth (uniform convexity):

    F_k - F* <= D g_0 exp(-k ln(1+S) / (c^{1/2} + ln(1+S)/2)),
    S = (3 sqrt(3) / (4 c^{3/2})) sqrt(sigma3 / H).
    """
    consts = TraceConstants.from_header(trace.header)
    F_star = consts.F_star if F_star is None else F_star
    sigma3 = consts.sigma3 if sigma3 is None else sigma3
    H = consts.H if H is None else H
    D_hat = _d_hat(trace) if D_hat is None else D_hat
    name = "linear_rate_uc"
    anchor = "F_k - F* decays geometrically under cubic lower growth"
    armed = (
        consts.mode == "basic"
        and F_star is not None
        and sigma3 is not None
        and sigma3 > 0.0
        and D_hat is not None
        and H is not None
        and H >= consts.L2 * (1.0 - EXACT_SLACK)
    )
    if not armed:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="basic mode, F* known, sigma3 > 0, H >= L2")
    if c is None:
        c = consts.contraction_factor(H)
    if g0 is None:
        g0 = trace.records[0].g_norm
    S = 0.75 * math.sqrt(3.0) / c**1.5 * math.sqrt(sigma3 / H)
    rate = math.log1p(S) / (math.sqrt(c) + 0.5 * math.log1p(S))
    gaps = _gaps(trace, F_star)
    worst_margin, worst = math.inf, (0, 0.0, 0.0, 0.0)
    for k, Fk in enumerate(gaps):
        bound = D_hat * g0 * math.exp(-rate * k)
        slack = TRACE_SLACK * bound + 32.0 * EPS * (1.0 + abs(Fk) + abs(F_star))
        margin = bound - Fk + slack
        if margin < worst_margin:
            worst_margin, worst = margin, (k, Fk, bound, slack)
    k, lhs, rhs, slack = worst
    return _cert(name, anchor, lhs, rhs, slack,
                 armed_conditions="basic mode, F* known, sigma3 > 0, H >= L2",
                 details={"worst_k": k, "S": S, "rate": rate, "D_hat": D_hat})


def check_superlinear(
    trace: Trace,
    mu: float | None = None,
    H: float | None = None,
    c: float | None = None,
) -> Certificate:
    """Per-step superlinear recursion on strongly convex problems:

    |F'(x_{k+1})|_* <= (2c/mu) sqrt(H/3) |F'(x_k)|_*^{3/2}.
    """
    consts = TraceConstants.from_header(trace.header)
    mu = consts.mu if mu is None else mu
    name = "superlinear"
    anchor = "|F'(x_{k+1})|_* <= (2c/mu) sqrt(H/3) |F'(x_k)|_*^{3/2}"
    armed = mu is not None and mu > 0.0 and len(trace.records) > 1
    if not armed:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="mu > 0 and at least one step")
    worst_margin, worst = math.inf, None
    for prev, cur in zip(trace.records[:-1], trace.records[1:]):
        Hu = H if H is not None else prev.H_used
        if Hu is None:
            continue
        cu = c if c is not None else consts.contraction_factor(Hu)
        rhs = 2.0 * cu / mu * math.sqrt(Hu / 3.0) * prev.g_norm**1.5
        noise = 8.0 * ((prev.fp_noise or 0.0) + EPS * (prev.g_norm + cur.g_norm))
        slack = GNORM_SLACK * rhs + noise + 4.0 * cu * (prev.inner_residual or 0.0)
        margin = rhs - cur.g_norm + slack
        if margin < worst_margin:
            worst_margin, worst = margin, (prev.k, cur.g_norm, rhs, slack)
    if worst is None:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="no steps with a recorded curvature estimate")
    k, lhs, rhs, slack = worst
    return _cert(name, anchor, lhs, rhs, slack,
                 armed_conditions="mu > 0",
                 details={"worst_k": k, "mu": mu})


def check_gradient_complexity(
    trace: Trace,
    delta: float | None = None,
    g0: float | None = None,
    c: float | None = None,
    H: float | None = None,
    D_hat: float | None = None,
) -> Certificate:
    """The number of steps with |F'(x_k)|_* >= delta is bounded:

    N <= 2 c^2 sqrt(3 H D^2 / delta) + (3/2) ln(g_0/delta) + ln c.
    """
    consts = TraceConstants.from_header(trace.header)
    H = consts.H if H is None else H
    D_hat = _d_hat(trace) if D_hat is None else D_hat
    delta = consts.grad_tolerance if delta is None else delta
    name = "gradient_complexity"
    anchor = "steps with |F'| >= delta are bounded by O(sqrt(H D^2 / delta))"
    stop_reason = trace.summary.get("stop_reason")
    armed = (
        consts.mode == "basic"
        and stop_reason == "grad_tolerance"
        and delta is not None
        and delta > 0.0
        and D_hat is not None
        and H is not None
        and H >= consts.L2 * (1.0 - EXACT_SLACK)
    )
    if not armed:
        return _cert(
            name, anchor, 0.0, 0.0, 0.0, armed=False,
            armed_conditions="basic mode, gradient-criterion stop, F* reference for D",
        )
    if g0 is None:
        g0 = trace.records[0].g_norm
    if c is None:
        c = consts.contraction_factor(H)
    N = len(trace.records) - 1
    if g0 < delta:
        return _cert(name, anchor, float(N), 0.0, 1.0,
                     armed_conditions="trivially satisfied: g_0 < delta",
                     details={"delta": delta})
    budget = (
        2.0 * c**2 * math.sqrt(3.0 * H * D_hat**2 / delta)
        + 1.5 * math.log(g0 / delta)
        + math.log(c)
    )
    return _cert(name, anchor, float(N), budget, TRACE_SLACK * abs(budget) + 1.0,
                 armed_conditions="basic mode, gradient-criterion stop, H >= L2",
                 details={"delta": delta, "D_hat": D_hat})


def check_gradient_complexity_uc(
    trace: Trace,
    delta: float | None = None,
    sigma3: float | None = None,
    H: float | None = None,
) -> Certificate:
    """Gradient-norm complexity under cubic lower growth:

    N <= (3 c^{1/2}/ln(1+S)) ln(3 c F_0 / (2 kappa sqrt(sigma3)))
       + 3 (1 + 2 c^{1/2}/ln(1+S)) ln(g_0/delta).
    """
    consts = TraceConstants.from_header(trace.header)
    H = consts.H if H is None else H
    sigma3 = consts.sigma3 if sigma3 is None else sigma3
    delta = consts.grad_tolerance if delta is None else delta
    name = "gradient_complexity_uc"
    anchor = "gradient-norm step count under cubic lower growth is logarithmic"
    stop_reason = trace.summary.get("stop_reason")
    armed = (
        consts.mode == "basic"
        and stop_reason == "grad_tolerance"
        and sigma3 is not None
        and sigma3 > 0.0
        and consts.F_star is not None
        and delta is not None
        and delta > 0.0
        and H is not None
        and H >= consts.L2 * (1.0 - EXACT_SLACK)
    )
    if not armed:
        return _cert(
            name, anchor, 0.0, 0.0, 0.0, armed=False,
            armed_conditions="basic mode, gradient stop, sigma3 > 0, F* known, H >= L2",
        )
    g0 = trace.records[0].g_norm
    N = len(trace.records) - 1
    if g0 < delta:
        return _cert(name, anchor, float(N), 0.0, 1.0,
                     armed_conditions="trivially satisfied: g_0 < delta",
                     details={"delta": delta})
    c = consts.contraction_factor(H)
    kappa = 0.5 / c**2 * math.sqrt(3.0 / H)
    S = 0.75 * math.sqrt(3.0) / c**1.5 * math.sqrt(sigma3 / H)
    F0 = trace.records[0].F_value - consts.F_star
    lS = math.log1p(S)
    budget = 3.0 * math.sqrt(c) / lS * math.log(
        3.0 * c * max(F0, EPS) / (2.0 * kappa * math.sqrt(sigma3))
    ) + 3.0 * (1.0 + 2.0 * math.sqrt(c) / lS) * math.log(g0 / delta)
    return _cert(name, anchor, float(N), budget, TRACE_SLACK * abs(budget) + 1.0,
                 armed_conditions="basic mode, gradient stop, sigma3 > 0, H >= L2",
                 details={"delta": delta, "S": S})


def check_line_search_budget(
    trace: Trace,
    eps: float,
    c0: float | None = None,
    L2: float | None = None,
    D_hat: float | None = None,
    F_star: float | None = None,
) -> Certificate:
    """Line-search iteration budget:

    k <= 4 c0^2 sqrt(2 Lbar D^3 / (3 eps)) + ln Theta,

    with c0 = 1/sigma + 3 L2/(2 H0) and Lbar = max(H0, L2); the max covers
    runs started above the Hessian's Lipschitz constant, where every trial
    H stays <= 2 Lbar.
    """
    consts = TraceConstants.from_header(trace.header)
    F_star = consts.F_star if F_star is None else F_star
    L2 = consts.L2 if L2 is None else L2
    D_hat = _d_hat(trace) if D_hat is None else D_hat
    name, anchor = "line_search_budget", "line-search iterations above gap eps are bounded"
    armed = (
        consts.mode == "line_search"
        and F_star is not None
        and D_hat is not None
        and consts.H0 is not None
    )
    if not armed:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="line-search mode, F* known")
    H0 = consts.H0
    if c0 is None:
        c0 = 1.0 / consts.sigma + (1.5 * L2 / H0 if L2 > 0.0 else 0.0)
    L_bar = max(H0, L2)
    gaps = _gaps(trace, F_star)
    above = np.nonzero(gaps >= eps)[0]
    if len(above) == 0 or gaps[0] <= 0.0:
        return _cert(name, anchor, 0.0, 1.0, 0.0,
                     armed_conditions="trivially satisfied: F_0 - F* < eps",
                     details={"eps": eps})
    g0 = trace.records[0].g_norm
    budget = 4.0 * c0**2 * math.sqrt(2.0 * L_bar * D_hat**3 / (3.0 * eps)) + _log_theta(
        gaps[0], g0, D_hat, eps
    )
    return _cert(name, anchor, float(above[-1]), budget, TRACE_SLACK * abs(budget) + 1.0,
                 armed_conditions="line-search mode, F* known",
                 details={"eps": eps, "c0": c0, "L_bar": L_bar, "D_hat": D_hat})


def check_h_bounds(trace: Trace) -> Certificate:
    """Line-search H stays within [H0, max(H0, L2)] and trial H <= 2 max(H0, L2)."""
    consts = TraceConstants.from_header(trace.header)
    name, anchor = "h_bounds", "H0 <= H_k <= max(H0, L2) and 2^{i_k} H_k <= 2 max(H0, L2)"
    armed = consts.mode == "line_search" and consts.H0 is not None
    if not armed:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="line-search mode")
    H0 = consts.H0
    cap = max(H0, consts.L2)
    worst_margin, worst = math.inf, (0, 0.0, cap, 0.0)
    for rec in trace.records:
        if rec.H_used is None:
            continue
        Hk = rec.H_used / 2.0**rec.i_k
        for lhs, rhs in ((H0, Hk), (Hk, cap), (rec.H_used, 2.0 * cap)):
            slack = EXACT_SLACK * (abs(rhs) + 1.0)
            margin = rhs - lhs + slack
            if margin < worst_margin:
                worst_margin, worst = margin, (rec.k, lhs, rhs, slack)
    k, lhs, rhs, slack = worst
    return _cert(name, anchor, lhs, rhs, slack,
                 armed_conditions="line-search mode", details={"worst_k": k})


def check_doubling_budget(trace: Trace) -> Certificate:
    """Total line-search doublings: sum i_k <= 2 N + log2(max(H0,L2)/H0) + 2."""
    consts = TraceConstants.from_header(trace.header)
    name, anchor = "doubling_budget", "sum of doublings grows linearly in the step count"
    armed = consts.mode == "line_search" and consts.H0 is not None
    if not armed:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="line-search mode")
    total = float(sum(rec.i_k for rec in trace.records if rec.H_used is not None))
    N = max(len(trace.records) - 1, 0)
    cap = max(consts.H0, consts.L2)
    budget = 2.0 * N + math.log2(cap / consts.H0) + 2.0
    return _cert(name, anchor, total, budget, EXACT_SLACK * (1.0 + budget),
                 armed_conditions="line-search mode", details={"N": N})


def check_ubound_uc(problem, x, sigma3: float | None = None) -> Certificate:
    """Pointwise consequence of cubic lower growth:

    F(x) - F* <= (2 / (3 sqrt(sigma3))) |F'(x)|_*^{3/2}.
    """
    name, anchor = "ubound_uc", "F(x) - F* <= 2 |F'(x)|^{3/2} / (3 sqrt(sigma3))"
    if sigma3 is None:
        sigma3 = problem.smooth.uniform_convexity_sigma3
    armed = sigma3 > 0.0 and problem.reference_optimum is not None
    if not armed:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="sigma3 > 0 and F* known")
    F_star = problem.reference_optimum[0]
    x = np.asarray(x, dtype=np.float64)
    g = problem.norms.dual(problem.initial_subgradient(x))
    lhs = problem.objective(x) - F_star
    rhs = 2.0 / (3.0 * math.sqrt(sigma3)) * g**1.5
    slack = TRACE_SLACK * rhs + 32.0 * EPS * (1.0 + abs(lhs) + abs(F_star))
    return _cert(name, anchor, lhs, rhs, slack,
                 armed_conditions="sigma3 > 0 and F* known")


def check_ubound_uc_trace(trace: Trace) -> Certificate:
    """Trace sweep of the cubic lower-growth gap bound using recorded g_k."""
    consts = TraceConstants.from_header(trace.header)
    name, anchor = "ubound_uc", "F_k - F* <= 2 g_k^{3/2} / (3 sqrt(sigma3))"
    armed = consts.sigma3 > 0.0 and consts.F_star is not None
    if not armed:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="sigma3 > 0 and F* known")
    worst_margin, worst = math.inf, (0, 0.0, 0.0, 0.0)
    for rec in trace.records:
        lhs = rec.F_value - consts.F_star
        rhs = 2.0 / (3.0 * math.sqrt(consts.sigma3)) * rec.g_norm**1.5
        slack = TRACE_SLACK * rhs + 32.0 * EPS * (1.0 + abs(rec.F_value))
        margin = rhs - lhs + slack
        if margin < worst_margin:
            worst_margin, worst = margin, (rec.k, lhs, rhs, slack)
    k, lhs, rhs, slack = worst
    return _cert(name, anchor, lhs, rhs, slack,
                 armed_conditions="sigma3 > 0 and F* known", details={"worst_k": k})


def check_b_growth(trace: Trace) -> Certificate:
    """Accelerated coefficient sums satisfy B_k >= k^3 / (27 L2)."""
    name, anchor = "b_growth", "B_k >= k^3 / (27 L2)"
    consts = TraceConstants.from_header(trace.header)
    L2 = trace.header.get("L2_f", consts.L2)
    armed = consts.mode == "accelerated" and L2 > 0.0
    if not armed:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="accelerated mode")
    worst_margin, worst = math.inf, (0, 0.0, 0.0, 0.0)
    for rec in trace.records:
        if rec.B is None or rec.k == 0:
            continue
        lhs = rec.k**3 / (27.0 * L2)
        slack = EXACT_SLACK * (1.0 + abs(rec.B))
        margin = rec.B - lhs + slack
        if margin < worst_margin:
            worst_margin, worst = margin, (rec.k, lhs, rec.B, slack)
    k, lhs, rhs, slack = worst
    return _cert(name, anchor, lhs, rhs, slack,
                 armed_conditions="accelerated mode", details={"worst_k": k})


def check_accel_budget(trace: Trace, eps: float | None = None) -> Certificate:
    """Accelerated outer-iteration budget to reach gap eps:

    first k with F_k - F* <= eps satisfies
    k <= ceil(sqrt(54) (L2 beta_phi(x0; x*) / eps)^{1/3}).
    """
    consts = TraceConstants.from_header(trace.header)
    name, anchor = "accel_budget", "outer iterations to gap eps are O((L2 beta / eps)^{1/3})"
    eps = consts.f_gap_tolerance if eps is None else eps
    L2 = trace.header.get("L2_f", consts.L2)
    armed = (
        consts.mode == "accelerated"
        and consts.F_star is not None
        and trace.x_star is not None
        and eps is not None
        and eps > 0.0
        and L2 > 0.0
        and len(trace.records) > 0
    )
    if not armed:
        return _cert(name, anchor, 0.0, 0.0, 0.0, armed=False,
                     armed_conditions="accelerated mode, F* and x* known, eps > 0")
    x0 = trace.records[0].x
    beta = (2.0 / 3.0) * float(np.linalg.norm(trace.x_star - x0)) ** 3
    budget = math.ceil(math.sqrt(54.0) * (L2 * beta / eps) ** (1.0 / 3.0))
    gaps = _gaps(trace, consts.F_star)
    reached = np.nonzero(gaps <= eps)[0]
    lhs = float(reached[0]) if len(reached) else math.inf
    details = {"eps": eps, "beta": beta}
    armed_note = "accelerated mode, F* and x* known"
    if trace.header.get("third_derivative_heuristic"):
        details["heuristic"] = "smooth part lacks third derivatives everywhere"
        armed_note += " (third-derivative hypothesis heuristic)"
    if not len(reached) and len(trace.records) - 1 < budget:
        # The run was capped before the budget was exhausted: undetermined.
        return _cert(name, anchor, lhs, float(budget), 0.0, armed=False,
                     armed_conditions="run capped before the iteration budget was spent",
                     details=details)
    return _cert(name, anchor, lhs, float(budget), 0.0,
                 armed_conditions=armed_note, details=details)


# ---------------------------------------------------------------------------
# Drivers


STEP_CHECK_NAMES = (
    "model_decrease",
    "step_size",
    "regularization_bound",
    "subgradient_norm",
    "subgradient_contraction",
    "cubic_upper_bound",
    "step_decrease",
    "progress",
    "monotone",
    "superlinear",
)


def aggregate_step_certificates(trace: Trace) -> list[Certificate]:
    """Re-run every per-step check over the trace; one summary per check.

    The summary keeps the worst (smallest-margin) occurrence so a single
    failing step surfaces as a failing certificate.
    """
    consts = TraceConstants.from_header(trace.header)
    worst: dict[str, Certificate] = {}
    counts: dict[str, int] = {}
    for prev, cur in zip(trace.records[:-1], trace.records[1:]):
        for cert in step_certificates(prev, cur, consts):
            counts[cert.name] = counts.get(cert.name, 0) + 1
            cur_worst = worst.get(cert.name)
            if cur_worst is None or _margin(cert) < _margin(cur_worst):
                cert.details = {**cert.details, "worst_k": prev.k}
                worst[cert.name] = cert
    out = []
    for name in STEP_CHECK_NAMES:
        if name in worst:
            c = worst[name]
            c.details["checked_steps"] = counts[name]
            out.append(c)
    return out


def _margin(cert: Certificate) -> float:
    if cert.verdict == NOT_ARMED:
        return math.inf
    return cert.rhs + cert.slack - cert.lhs


def certify_trace(trace: Trace, eps_levels: tuple[float, ...] = (1e-3, 1e-6)) -> list[Certificate]:
    """Every applicable certificate for a stored trace."""
    consts = TraceConstants.from_header(trace.header)
    certs = aggregate_step_certificates(trace)
    if consts.mode == "basic":
        for eps in eps_levels:
            certs.append(check_functional_rate(trace, eps))
            certs.append(check_iteration_budget(trace, eps))
        certs.append(check_linear_rate_uc(trace))
        certs.append(check_gradient_complexity(trace))
        certs.append(check_gradient_complexity_uc(trace))
    if consts.mode == "line_search":
        certs.append(check_h_bounds(trace))
        certs.append(check_doubling_budget(trace))
        for eps in eps_levels:
            certs.append(check_line_search_budget(trace, eps))
    if consts.mode == "accelerated":
        certs.append(check_b_growth(trace))
        certs.append(check_accel_budget(trace))
    if consts.mu > 0.0:
        certs.append(check_superlinear(trace))
    if consts.sigma3 > 0.0:
        certs.append(check_ubound_uc_trace(trace))
    return certs


def write_report(certs: list[Certificate], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for cert in certs:
            fh.write(json.dumps(cert.to_json_dict(), separators=(",", ":")) + "\n")


def read_report(path: str | os.PathLike) -> list[dict]:
    with open(path, "r", encoding="ascii") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def format_table(certs: list[Certificate]) -> str:
    rows = [("certificate", "verdict", "lhs", "rhs", "slack")]
    for c in certs:
        rows.append((c.name, c.verdict, f"{c.lhs:.6g}", f"{c.rhs:.6g}", f"{c.slack:.2g}"))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)))
        if i == 0:
            lines.append("-" * (sum(widths) + 8))
    return "\n".join(lines)
