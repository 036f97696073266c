"""Composite problems F = f + psi: smooth oracles, simple parts, constructors.

The smooth part exposes value/gradient/Hessian plus the curvature constants
the solvers and certificates consume: ``lips_hessian`` (Lipschitz constant
of the Hessian), optional ``strong_convexity_mu`` and
``uniform_convexity_sigma3`` (cubic lower-growth modulus). The simple part
is one of {zero, l1, box} and supports the proximal step used by the
subproblem solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np
from scipy.special import expit, logsumexp, softmax

from .datasets import LabeledDataset
from .exceptions import InvalidInputError
from .linalg import (
    Array,
    DualVector,
    HessianView,
    NormPair,
    PrimalVector,
    euclidean_norms,
    operator_norm,
)
from .scaling import EuclideanScaling, ScalingFunction
from .validation import check_matrix, check_scalar, check_vector


# ---------------------------------------------------------------------------
# Smooth oracles


class SmoothOracle:
    """Convex, twice continuously differentiable smooth part."""

    dim: int
    lips_hessian: float = 0.0
    strong_convexity_mu: float = 0.0
    uniform_convexity_sigma3: float = 0.0
    #: whether third derivatives exist everywhere (the norm-cube family has
    #: a kink at its center; schemes that assume three derivatives mark
    #: their certificates as heuristic on such instances).
    thrice_differentiable: bool = True

    def value(self, x: PrimalVector) -> float:
        raise NotImplementedError

    def gradient(self, x: PrimalVector) -> DualVector:
        raise NotImplementedError

    def hessian(self, x: PrimalVector) -> HessianView:
        raise NotImplementedError


class QuadraticOracle(SmoothOracle):
    """f(x) = <Qx, x>/2 - <b, x> with positive semidefinite Q."""

    def __init__(self, Q, b=None):
        Q = check_matrix(Q, name="Q")
        self.dim = Q.shape[0]
        self.Q = 0.5 * (Q + Q.T)
        self.b = np.zeros(self.dim) if b is None else check_vector(b, dim=self.dim, name="b")
        lam_min = float(np.linalg.eigvalsh(self.Q)[0])
        if lam_min < -1e-10 * max(1.0, float(np.abs(self.Q).max())):
            raise InvalidInputError("Q must be positive semidefinite")
        self.strong_convexity_mu = max(lam_min, 0.0)
        self._view = HessianView(matrix=self.Q)

    def value(self, x):
        return 0.5 * float(x @ self.Q @ x) - float(self.b @ x)

    def gradient(self, x):
        return self.Q @ x - self.b

    def hessian(self, x):
        return self._view


class LogisticOracle(SmoothOracle):
    """Binary logistic loss with an optional ridge term and linear tilt.

    f(x) = sum_i log(1 + exp(-y_i <a_i, x>)) + (ridge/2) ||x||^2 - <tilt, x>

    The tilt is used to plant a known stationary point: with
    tilt = grad of the untilted loss at x*, the tilted objective has
    gradient zero exactly at x*.
    """

    def __init__(self, features: Array, labels: Array, ridge: float = 0.0, tilt=None):
        self.A = check_matrix(features, name="features")
        m, n = self.A.shape
        self.dim = n
        self.y = check_vector(labels, dim=m, name="labels")
        self.ridge = check_scalar(ridge, "ridge", nonnegative=True)
        self.tilt = None if tilt is None else check_vector(tilt, dim=n, name="tilt")
        self.strong_convexity_mu = self.ridge

    def _margins(self, x):
        return self.y * (self.A @ x)

    def value(self, x):
        v = float(np.sum(np.logaddexp(0.0, -self._margins(x))))
        v += 0.5 * self.ridge * float(x @ x)
        if self.tilt is not None:
            v -= float(self.tilt @ x)
        return v

    def gradient(self, x):
        s = expit(-self._margins(x))
        g = self.A.T @ (-self.y * s) + self.ridge * x
        if self.tilt is not None:
            g = g - self.tilt
        return g

    def hessian(self, x):
        s = expit(-self._margins(x))
        d = s * (1.0 - s)
        H = self.A.T @ (d[:, None] * self.A)
        H[np.diag_indices_from(H)] += self.ridge
        return HessianView(matrix=H)


class LogSumExpOracle(SmoothOracle):
    """Smoothed max: f(x) = tau * log(sum_i exp((<a_i, x> - b_i) / tau))."""

    def __init__(self, A: Array, b: Array, tau: float = 1.0):
        self.A = check_matrix(A, name="A")
        m, n = self.A.shape
        self.dim = n
        self.b = check_vector(b, dim=m, name="b")
        self.tau = check_scalar(tau, "tau", positive=True)

    def _z(self, x):
        return (self.A @ x - self.b) / self.tau

    def value(self, x):
        return self.tau * float(logsumexp(self._z(x)))

    def gradient(self, x):
        w = softmax(self._z(x))
        return self.A.T @ w

    def hessian(self, x):
        w = softmax(self._z(x))
        g = self.A.T @ w
        H = (self.A.T @ (w[:, None] * self.A) - np.outer(g, g)) / self.tau
        return HessianView(matrix=H)


class NormCubeOracle(SmoothOracle):
    """f(x) = (coef/3) ||x - center||^3 in the Euclidean norm.

    Hessian coef*(||r|| I + r r^T / ||r||) is 2*coef-Lipschitz; the cubic
    lower-growth modulus is coef/2 (tight along antipodal directions).
    """

    def __init__(self, coef: float, dim: int, center=None):
        self.coef = check_scalar(coef, "coef", positive=True)
        self.dim = int(dim)
        self.center = (
            np.zeros(self.dim) if center is None else check_vector(center, dim=self.dim)
        )
        self.lips_hessian = 2.0 * self.coef
        self.uniform_convexity_sigma3 = 0.5 * self.coef
        self.thrice_differentiable = False

    def value(self, x):
        r = np.linalg.norm(x - self.center)
        return (self.coef / 3.0) * float(r**3)

    def gradient(self, x):
        r = x - self.center
        return self.coef * np.linalg.norm(r) * r

    def hessian(self, x):
        r = x - self.center
        nr = float(np.linalg.norm(r))
        if nr == 0.0:
            H = np.zeros((self.dim, self.dim))
        else:
            H = self.coef * (nr * np.eye(self.dim) + np.outer(r, r) / nr)
        return HessianView(matrix=H)


class CubicResidualsOracle(SmoothOracle):
    """f(x) = (1/3) sum_i |<a_i, x> - b_i|^3.

    Convex and Hessian-Lipschitz with L2 <= 2 * sum_i ||a_i||^3; the Hessian
    at a point where many residuals vanish is rank-deficient, which makes
    this the degenerate-optimum benchmark.
    """

    def __init__(self, A: Array, b: Array):
        self.A = check_matrix(A, name="A")
        m, n = self.A.shape
        self.dim = n
        self.b = check_vector(b, dim=m, name="b")
        self.lips_hessian = 2.0 * float(np.sum(np.linalg.norm(self.A, axis=1) ** 3))
        self.thrice_differentiable = False

    def _res(self, x):
        return self.A @ x - self.b

    def value(self, x):
        r = self._res(x)
        return float(np.sum(np.abs(r) ** 3)) / 3.0

    def gradient(self, x):
        r = self._res(x)
        return self.A.T @ (np.abs(r) * r)

    def hessian(self, x):
        r = self._res(x)
        return HessianView(matrix=self.A.T @ ((2.0 * np.abs(r))[:, None] * self.A))


class SumOracle(SmoothOracle):
    """Sum of smooth oracles; curvature constants add."""

    def __init__(self, *parts: SmoothOracle):
        if not parts:
            raise InvalidInputError("SumOracle needs at least one part")
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise InvalidInputError(f"inconsistent part dimensions: {dims}")
        self.parts = parts
        self.dim = parts[0].dim
        self.lips_hessian = float(sum(p.lips_hessian for p in parts))
        self.strong_convexity_mu = float(sum(p.strong_convexity_mu for p in parts))
        self.uniform_convexity_sigma3 = float(
            sum(p.uniform_convexity_sigma3 for p in parts)
        )
        self.thrice_differentiable = all(p.thrice_differentiable for p in parts)

    def value(self, x):
        return float(sum(p.value(x) for p in self.parts))

    def gradient(self, x):
        g = np.zeros(self.dim)
        for p in self.parts:
            g += p.gradient(x)
        return g

    def hessian(self, x):
        views = [p.hessian(x) for p in self.parts]
        if all(v.has_matrix for v in views):
            H = np.zeros((self.dim, self.dim))
            for v in views:
                H += v.matrix
            return HessianView(matrix=H)
        return HessianView(
            matvec=lambda h: sum(v.apply(h) for v in views), dim=self.dim
        )


class TiltedOracle(SmoothOracle):
    """base(x) - <tilt, x> + offset; curvature is untouched by the tilt."""

    def __init__(self, base: SmoothOracle, tilt, offset: float = 0.0):
        self.base = base
        self.dim = base.dim
        self.tilt = check_vector(tilt, dim=base.dim, name="tilt")
        self.offset = float(offset)
        self.lips_hessian = base.lips_hessian
        self.strong_convexity_mu = base.strong_convexity_mu
        self.uniform_convexity_sigma3 = base.uniform_convexity_sigma3
        self.thrice_differentiable = base.thrice_differentiable

    def value(self, x):
        return self.base.value(x) - float(self.tilt @ x) + self.offset

    def gradient(self, x):
        return self.base.gradient(x) - self.tilt

    def hessian(self, x):
        return self.base.hessian(x)


class ContractedOracle(SmoothOracle):
    """B * f((b x + anchor) / B): the contracted smooth part used by the
    accelerated scheme. Its Hessian-Lipschitz constant is (b^3/B^2) * L2(f).
    """

    def __init__(self, base: SmoothOracle, b_coef: float, B_coef: float, anchor):
        self.base = base
        self.dim = base.dim
        self.b_coef = check_scalar(b_coef, "b_coef", positive=True)
        self.B_coef = check_scalar(B_coef, "B_coef", positive=True)
        self.anchor = check_vector(anchor, dim=base.dim, name="anchor")
        ratio = self.b_coef / self.B_coef
        self.lips_hessian = ratio**2 * self.b_coef * base.lips_hessian
        self.strong_convexity_mu = ratio**2 * self.B_coef * base.strong_convexity_mu
        self.uniform_convexity_sigma3 = ratio**2 * self.b_coef * base.uniform_convexity_sigma3
        self.thrice_differentiable = base.thrice_differentiable

    def _z(self, x):
        return (self.b_coef * x + self.anchor) / self.B_coef

    def value(self, x):
        return self.B_coef * self.base.value(self._z(x))

    def gradient(self, x):
        return self.b_coef * self.base.gradient(self._z(x))

    def hessian(self, x):
        inner = self.base.hessian(self._z(x))
        scale = self.b_coef**2 / self.B_coef
        if inner.has_matrix:
            return HessianView(matrix=scale * inner.matrix)
        return HessianView(matvec=lambda h: scale * inner.apply(h), dim=self.dim)


# ---------------------------------------------------------------------------
# Simple (possibly nonsmooth) parts


class CompositePart:
    """Simple closed convex term psi with proximal-step support."""

    kind: str = "zero"

    def value(self, x: PrimalVector) -> float:
        return 0.0

    def prox(self, z: PrimalVector, t: float) -> PrimalVector:
        """argmin_y psi(y) + ||y - z||^2 / (2 t)."""
        return z

    def min_norm_subgradient(self, x: PrimalVector) -> DualVector:
        """The smallest-norm element of the subdifferential at a feasible x."""
        return np.zeros_like(x)

    def contains(self, x: PrimalVector) -> bool:
        return True

    def strictly_contains(self, x: PrimalVector) -> bool:
        return True

    def project(self, x: PrimalVector) -> PrimalVector:
        """Nearest feasible point (used when sampling test points)."""
        return x

    def scaled(self, factor: float) -> "CompositePart":
        """factor * psi for factor > 0."""
        return self

    def describe(self) -> dict:
        return {"kind": self.kind}


class ZeroPart(CompositePart):
    kind = "zero"


class L1Part(CompositePart):
    """psi(x) = lam * ||x||_1 with soft-threshold prox."""

    kind = "l1"

    def __init__(self, lam: float):
        self.lam = check_scalar(lam, "lam", positive=True)

    def value(self, x):
        return self.lam * float(np.sum(np.abs(x)))

    def prox(self, z, t):
        thr = self.lam * t
        return np.sign(z) * np.maximum(np.abs(z) - thr, 0.0)

    def min_norm_subgradient(self, x):
        # lam * sign(x); zero components contribute the zero element of
        # [-lam, lam], which is the minimum-norm choice.
        return self.lam * np.sign(x)

    def scaled(self, factor):
        return L1Part(self.lam * factor)

    def describe(self):
        return {"kind": "l1", "lam": self.lam}


class BoxPart(CompositePart):
    """Indicator of the box [lo, hi] (componentwise, entries may be +-inf)."""

    kind = "box"

    def __init__(self, lo, hi):
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        if lo.ndim == 0:
            lo = lo.reshape(1)
        if hi.ndim == 0:
            hi = hi.reshape(1)
        if lo.shape != hi.shape:
            raise InvalidInputError("box bounds must have matching shapes")
        if np.any(lo >= hi):
            raise InvalidInputError("box must have nonempty interior (lo < hi)")
        self.lo = lo
        self.hi = hi

    def _expand(self, x):
        if self.lo.shape[0] == 1 and x.shape[0] != 1:
            return np.full_like(x, self.lo[0]), np.full_like(x, self.hi[0])
        return self.lo, self.hi

    def value(self, x):
        lo, hi = self._expand(x)
        tol = 1e-12 * (1.0 + np.max(np.abs(x), initial=0.0))
        if np.any(x < lo - tol) or np.any(x > hi + tol):
            return float("inf")
        return 0.0

    def prox(self, z, t):
        lo, hi = self._expand(z)
        return np.clip(z, lo, hi)

    def min_norm_subgradient(self, x):
        # Zero belongs to the normal cone at every feasible point.
        if not self.contains(x):
            raise InvalidInputError("point lies outside the box")
        return np.zeros_like(x)

    def contains(self, x):
        return np.isfinite(self.value(x))

    def strictly_contains(self, x):
        lo, hi = self._expand(x)
        return bool(np.all(x > lo) and np.all(x < hi))

    def project(self, x):
        return self.prox(x, 1.0)

    def scaled(self, factor):
        return self

    def describe(self):
        return {
            "kind": "box",
            "lo": [float(v) for v in self.lo],
            "hi": [float(v) for v in self.hi],
        }


def zero_part() -> ZeroPart:
    return ZeroPart()


def l1_part(lam: float) -> L1Part:
    return L1Part(lam)


def box_part(lo, hi) -> BoxPart:
    return BoxPart(lo, hi)


# ---------------------------------------------------------------------------
# Composite problem


@dataclass
class CompositeProblem:
    """F = f + psi together with the norm pair and scaling function."""

    smooth: SmoothOracle
    simple: CompositePart
    scaling: ScalingFunction
    norms: NormPair
    name: str = ""
    reference_optimum: tuple[float, Array] | None = None
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.smooth.dim

    def objective(self, x: PrimalVector) -> float:
        return self.smooth.value(x) + self.simple.value(x)

    def feasible(self, x: PrimalVector) -> bool:
        return self.simple.contains(x)

    def initial_subgradient(self, x0: PrimalVector, strict: bool = True) -> DualVector:
        """A reproducible element of the subdifferential of F at ``x0``.

        Uses the minimum-norm element of the psi subdifferential. With
        ``strict`` (the default, used for starting points) indicator parts
        additionally require a strictly interior point.
        """
        x0 = check_vector(x0, dim=self.dim, name="x0")
        if not self.simple.contains(x0):
            raise InvalidInputError("x0 lies outside dom psi")
        if strict and self.simple.kind == "box" and not self.simple.strictly_contains(x0):
            raise InvalidInputError("x0 must be strictly inside the box")
        return self.smooth.gradient(x0) + self.simple.min_norm_subgradient(x0)

    def with_reference(self, F_star: float, x_star) -> "CompositeProblem":
        x_star = check_vector(x_star, dim=self.dim, name="x_star")
        return CompositeProblem(
            smooth=self.smooth,
            simple=self.simple,
            scaling=self.scaling,
            norms=self.norms,
            name=self.name,
            reference_optimum=(float(F_star), x_star),
            params=dict(self.params),
        )

    def describe(self) -> dict:
        out = {
            "name": self.name,
            "dim": self.dim,
            "simple": self.simple.describe(),
            "scaling": self.scaling.describe(),
            "norms": self.norms.describe(),
            "lips_hessian": self.smooth.lips_hessian,
            "strong_convexity_mu": self.smooth.strong_convexity_mu,
            "uniform_convexity_sigma3": self.smooth.uniform_convexity_sigma3,
        }
        if self.reference_optimum is not None:
            out["F_star"] = float(self.reference_optimum[0])
            out["x_star"] = [float(v) for v in self.reference_optimum[1]]
        if self.params:
            out["params"] = self.params
        return out


# ---------------------------------------------------------------------------
# Curvature-constant estimation and analytic bounds


def estimate_lips_hessian(
    oracle: SmoothOracle,
    norms: NormPair | None = None,
    center=None,
    radius: float = 2.0,
    n_pairs: int = 160,
    seed: int = 0,
    margin: float = 1.05,
) -> float:
    """Sampled Hessian-Lipschitz constant estimate.

    Takes the maximum of ||H(x) - H(y)|| / |x - y| over random pairs inside
    a ball around ``center`` (mixing well-separated and nearly coincident
    pairs to probe both global and local variation) and inflates it by
    ``margin``.
    """
    norms = norms or euclidean_norms()
    center = (
        np.zeros(oracle.dim) if center is None else check_vector(center, dim=oracle.dim)
    )
    rng = np.random.default_rng(seed)
    best = 0.0
    for i in range(n_pairs):
        u = rng.standard_normal(oracle.dim)
        u *= radius * rng.random() / max(np.linalg.norm(u), 1e-30)
        x = center + u
        if i % 2 == 0:
            v = rng.standard_normal(oracle.dim)
            v *= radius * rng.random() / max(np.linalg.norm(v), 1e-30)
            y = center + v
        else:
            step = rng.standard_normal(oracle.dim)
            y = x + 1e-4 * radius * step / max(np.linalg.norm(step), 1e-30)
        dist = norms.primal(x - y)
        if dist <= 1e-14 * radius:
            continue
        diff = oracle.hessian(x).matrix - oracle.hessian(y).matrix
        best = max(best, operator_norm(HessianView(matrix=diff), norms) / dist)
    return margin * best


def logistic_lips_bound(data: LabeledDataset) -> float:
    """Analytic Hessian-Lipschitz bound for the logistic loss (Euclidean)."""
    row_norms = np.linalg.norm(data.features, axis=1)
    return float(np.sum(row_norms**3)) / (6.0 * np.sqrt(3.0))


def log_sum_exp_lips_bound(A: Array, tau: float) -> float:
    """Analytic Hessian-Lipschitz bound for the smoothed max (Euclidean)."""
    max_row = float(np.max(np.linalg.norm(A, axis=1)))
    return 2.0 * max_row**3 / tau**2


# ---------------------------------------------------------------------------
# Instance constructors


def make_logistic(
    data: LabeledDataset,
    ridge_mu: float = 0.0,
    *,
    lips_hessian: float | None = None,
    optimum_at=None,
    scaling: ScalingFunction | None = None,
    norms: NormPair | None = None,
    l2_radius: float = 2.0,
    l2_seed: int = 0,
    name: str = "logistic",
) -> CompositeProblem:
    """Ridge-regularized logistic regression with psi = 0.

    When ``lips_hessian`` is omitted the constant is estimated by sampling
    Hessian differences around the origin (inflated by 5%). Passing
    ``optimum_at=x*`` tilts the objective by the loss gradient at ``x*`` so
    the optimum is known exactly; the reference optimum is then recorded.
    """
    if data.n_samples < 1:
        raise InvalidInputError("dataset is empty")
    ridge_mu = check_scalar(ridge_mu, "ridge_mu", nonnegative=True)
    norms = norms or euclidean_norms()
    scaling = scaling or EuclideanScaling()
    tilt = None
    if optimum_at is not None:
        x_star = check_vector(optimum_at, dim=data.n_features, name="optimum_at")
        plain = LogisticOracle(data.features, data.labels, ridge=ridge_mu)
        tilt = plain.gradient(x_star)
    oracle = LogisticOracle(data.features, data.labels, ridge=ridge_mu, tilt=tilt)
    if lips_hessian is None:
        center = x_star if optimum_at is not None else None
        lips_hessian = estimate_lips_hessian(
            oracle, norms=norms, center=center, radius=l2_radius, seed=l2_seed
        )
    oracle.lips_hessian = check_scalar(lips_hessian, "lips_hessian", nonnegative=True)
    problem = CompositeProblem(
        smooth=oracle,
        simple=zero_part(),
        scaling=scaling,
        norms=norms,
        name=name,
        params={"ridge_mu": ridge_mu, "m": data.n_samples, "n": data.n_features},
    )
    if optimum_at is not None:
        problem = problem.with_reference(oracle.value(x_star), x_star)
    return problem


def make_cubic_uc(Q, sigma3: float, *, name: str = "cubic_uc") -> CompositeProblem:
    """f(x) = <Qx, x>/2 + (sigma3/3) ||x||^3 with psi = 0, Euclidean setup.

    Q must be positive semidefinite; the optimum is the origin with value 0.
    The declared cubic lower-growth modulus is sigma3/2 (the provable
    constant for the norm cube; the naive sigma3 fails on antipodal pairs),
    and the Hessian-Lipschitz constant of the cubic term is 2*sigma3.
    """
    sigma3 = check_scalar(sigma3, "sigma3", positive=True)
    if isinstance(Q, HessianView):
        Q = Q.matrix
    Q = check_matrix(Q, name="Q")
    quad = QuadraticOracle(Q)
    cube = NormCubeOracle(coef=sigma3, dim=Q.shape[0])
    oracle = SumOracle(quad, cube)
    problem = CompositeProblem(
        smooth=oracle,
        simple=zero_part(),
        scaling=EuclideanScaling(),
        norms=euclidean_norms(),
        name=name,
        params={"sigma3": sigma3, "n": Q.shape[0]},
    )
    return problem.with_reference(0.0, np.zeros(Q.shape[0]))


def make_l1_quadratic(
    Q,
    b,
    lam: float,
    *,
    name: str = "l1_quadratic",
) -> CompositeProblem:
    """f(x) = <Qx, x>/2 - <b, x> with psi(x) = lam ||x||_1; L2 = 0."""
    lam = check_scalar(lam, "lam", positive=True)
    if isinstance(Q, HessianView):
        Q = Q.matrix
    oracle = QuadraticOracle(Q, b)
    return CompositeProblem(
        smooth=oracle,
        simple=l1_part(lam),
        scaling=EuclideanScaling(),
        norms=euclidean_norms(),
        name=name,
        params={"lam": lam, "n": oracle.dim},
    )


def make_box_quadratic(Q, b, lo, hi, *, name: str = "box_quadratic") -> CompositeProblem:
    """f(x) = <Qx, x>/2 - <b, x> restricted to the box [lo, hi]; L2 = 0."""
    oracle = QuadraticOracle(Q, b)
    return CompositeProblem(
        smooth=oracle,
        simple=box_part(lo, hi),
        scaling=EuclideanScaling(),
        norms=euclidean_norms(),
        name=name,
        params={"n": oracle.dim},
    )


def make_log_sum_exp(
    A,
    b,
    tau: float = 1.0,
    *,
    lips_hessian: float | None = None,
    name: str = "log_sum_exp",
) -> CompositeProblem:
    """Smoothed-max objective with psi = 0, Euclidean setup."""
    oracle = LogSumExpOracle(A, b, tau)
    if lips_hessian is None:
        lips_hessian = log_sum_exp_lips_bound(oracle.A, tau)
    oracle.lips_hessian = check_scalar(lips_hessian, "lips_hessian", nonnegative=True)
    return CompositeProblem(
        smooth=oracle,
        simple=zero_part(),
        scaling=EuclideanScaling(),
        norms=euclidean_norms(),
        name=name,
        params={"tau": tau, "m": oracle.A.shape[0], "n": oracle.dim},
    )


def make_cubic_regression(
    A,
    b,
    *,
    lips_hessian: float | None = None,
    name: str = "cubic_regression",
) -> CompositeProblem:
    """f(x) = (1/3) sum_i |<a_i, x> - b_i|^3 with psi = 0.

    With rows chosen so that the optimum has mostly zero residuals this is
    the degenerate (rank-deficient Hessian at the optimum) benchmark.
    """
    oracle = CubicResidualsOracle(A, b)
    if lips_hessian is not None:
        oracle.lips_hessian = check_scalar(lips_hessian, "lips_hessian", positive=True)
    return CompositeProblem(
        smooth=oracle,
        simple=zero_part(),
        scaling=EuclideanScaling(),
        norms=euclidean_norms(),
        name=name,
        params={"m": oracle.A.shape[0], "n": oracle.dim},
    )
