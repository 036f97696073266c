"""Scaling functions and the Bregman distance they induce.

A scaling function ``d`` must be sigma-strongly convex (sigma in (0, 1])
and have a 1-Lipschitz gradient with respect to the problem's norm pair:

    d(y) >= d(x) + <grad d(x), y - x> + (sigma/2) |y - x|^2
    |grad d(x) - grad d(y)|_* <= |x - y|

Both shipped instances are quadratic, so their Hessian is a constant
diagonal and the induced Bregman distance has a closed form.
"""

from __future__ import annotations

import numpy as np

from .exceptions import InvalidInputError, NumericError
from .linalg import Array, DualVector, PrimalVector
from .validation import check_scalar, check_vector


class ScalingFunction:
    """Base scaling function; subclasses define value/gradient and sigma."""

    sigma: float
    #: True when the function is a quadratic form, i.e. the Hessian is constant.
    quadratic: bool = False

    def value(self, x: PrimalVector) -> float:
        raise NotImplementedError

    def gradient(self, x: PrimalVector) -> DualVector:
        raise NotImplementedError

    def curvature_diagonal(self, dim: int) -> Array:
        """Constant Hessian diagonal for quadratic scalings."""
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": type(self).__name__, "sigma": self.sigma}


class EuclideanScaling(ScalingFunction):
    """d(x) = ||x||^2 / 2, the identity gradient map; sigma = 1."""

    quadratic = True

    def __init__(self):
        self.sigma = 1.0

    def value(self, x: PrimalVector) -> float:
        return 0.5 * float(np.dot(x, x))

    def gradient(self, x: PrimalVector) -> DualVector:
        return np.array(x, dtype=np.float64, copy=True)

    def curvature_diagonal(self, dim: int) -> Array:
        return np.ones(dim)

    def describe(self) -> dict:
        return {"kind": "euclidean", "sigma": 1.0}


class WeightedScaling(ScalingFunction):
    """d(x) = (1/2) sum_i w_i x_i^2 with weights in (0, 1].

    Paired with the Euclidean norm this is strongly convex with modulus
    min(w) and has a 1-Lipschitz gradient because max(w) <= 1; that modulus
    is the default ``sigma``. A caller pairing it with the matching weighted
    norm may pass ``sigma=1.0`` explicitly.
    """

    quadratic = True

    def __init__(self, weights, sigma: float | None = None):
        w = check_vector(weights, name="weights")
        if np.any(w <= 0.0) or np.any(w > 1.0):
            raise InvalidInputError("scaling weights must lie in (0, 1]")
        self.weights = w
        if sigma is None:
            sigma = float(np.min(w))
        self.sigma = check_scalar(sigma, "sigma", positive=True)
        if self.sigma > 1.0:
            raise InvalidInputError("sigma must lie in (0, 1]")

    def value(self, x: PrimalVector) -> float:
        return 0.5 * float(np.dot(self.weights * x, x))

    def gradient(self, x: PrimalVector) -> DualVector:
        return self.weights * x

    def curvature_diagonal(self, dim: int) -> Array:
        if dim != self.weights.shape[0]:
            raise InvalidInputError("dimension mismatch with scaling weights")
        return self.weights

    def describe(self) -> dict:
        return {
            "kind": "weighted",
            "sigma": self.sigma,
            "weights": [float(w) for w in self.weights],
        }


def scaling_from_description(desc: dict) -> ScalingFunction:
    if desc.get("kind") == "weighted":
        return WeightedScaling(np.asarray(desc["weights"]), sigma=desc.get("sigma"))
    return EuclideanScaling()


def bregman(base: ScalingFunction, x: PrimalVector, y: PrimalVector) -> float:
    """Bregman distance d(y) - d(x) - <grad d(x), y - x>; nonnegative."""
    gap = base.value(y) - base.value(x) - float(np.dot(base.gradient(x), y - x))
    if not np.isfinite(gap):
        raise NumericError("Bregman distance overflowed")
    # Exactly zero on the diagonal; clip tiny negative rounding noise.
    if gap < 0.0:
        gap = 0.0 if gap > -1e-12 * (1.0 + abs(base.value(x))) else gap
    if gap < 0.0:
        raise NumericError(f"Bregman distance came out negative: {gap}")
    return gap


def bregman_gradient_gap(
    base: ScalingFunction, x: PrimalVector, y: PrimalVector
) -> DualVector:
    """grad d(y) - grad d(x); for the Euclidean scaling this is y - x."""
    return base.gradient(y) - base.gradient(x)
