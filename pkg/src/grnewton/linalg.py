"""Vector-space primitives: norms, dual norms, and Hessian views.

Points of the variable space and linear functionals on it (gradients,
subgradients) share the ndarray representation; the ``PrimalVector`` /
``DualVector`` aliases keep the two roles apart in signatures. Everything
here is immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, TypeAlias

import numpy as np
from numpy.typing import NDArray

from .exceptions import InvalidInputError, NumericError
from .validation import check_vector

Array: TypeAlias = NDArray[np.float64]
PrimalVector: TypeAlias = Array
DualVector: TypeAlias = Array


@dataclass(frozen=True)
class NormPair:
    """A primal norm and its dual norm.

    The dual norm is the support function of the primal unit ball,
    ``|g|_* = max{<g, x> : |x| <= 1}``, so that ``<g, x> <= |g|_* |x|``
    for every pair.
    """

    primal: Callable[[PrimalVector], float]
    dual: Callable[[DualVector], float]
    kind: str = "euclidean"
    weights: Array | None = field(default=None)

    def describe(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.weights is not None:
            out["weights"] = [float(w) for w in self.weights]
        return out


def euclidean_norms() -> NormPair:
    """Standard self-dual Euclidean pair."""
    nrm = lambda v: float(np.linalg.norm(v))
    return NormPair(primal=nrm, dual=nrm, kind="euclidean")


def weighted_norms(weights) -> NormPair:
    """Diagonally weighted Euclidean pair.

    Primal ``|x|^2 = sum_i w_i x_i^2`` with weights in (0, 1]; the dual norm
    is then ``|g|_*^2 = sum_i g_i^2 / w_i``.
    """
    w = check_vector(weights, name="weights")
    if np.any(w <= 0.0) or np.any(w > 1.0):
        raise InvalidInputError("weights must lie in (0, 1]")
    inv_w = 1.0 / w

    def primal(v: Array) -> float:
        return float(np.sqrt(np.dot(w * v, v)))

    def dual(g: Array) -> float:
        return float(np.sqrt(np.dot(inv_w * g, g)))

    return NormPair(primal=primal, dual=dual, kind="weighted", weights=w)


def norms_from_description(desc: dict) -> NormPair:
    if desc.get("kind") == "weighted":
        return weighted_norms(np.asarray(desc["weights"], dtype=np.float64))
    return euclidean_norms()


def dual_norm(g: DualVector, norms: NormPair) -> float:
    """Dual norm of a gradient/subgradient; zero iff ``g`` is zero."""
    g = check_vector(g, name="g")
    return norms.dual(g)


class HessianView:
    """Symmetric linear operator from the primal space to the dual one.

    Wraps either a dense symmetric matrix, an operator ``h -> B h``, or
    both. The dense form is required by direct (factorization) solvers;
    the operator form suffices for matrix-free conjugate gradients.
    """

    def __init__(
        self,
        matrix: Array | None = None,
        matvec: Callable[[Array], Array] | None = None,
        dim: int | None = None,
    ):
        if matrix is None and matvec is None:
            raise InvalidInputError("HessianView needs a matrix, a matvec, or both")
        if matrix is not None:
            matrix = np.asarray(matrix, dtype=np.float64)
            if matrix.ndim == 0:
                matrix = matrix.reshape(1, 1)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise InvalidInputError(f"Hessian matrix must be square, got {matrix.shape}")
            if dim is not None and matrix.shape[0] != dim:
                raise InvalidInputError("dim does not match matrix shape")
            dim = matrix.shape[0]
        if dim is None:
            raise InvalidInputError("operator-form HessianView needs an explicit dim")
        self._matrix = matrix
        self._matvec = matvec
        self.dim = int(dim)

    @property
    def has_matrix(self) -> bool:
        return self._matrix is not None

    @property
    def matrix(self) -> Array:
        if self._matrix is None:
            raise NumericError("dense Hessian requested from an operator-only view")
        return self._matrix

    def apply(self, h: PrimalVector) -> DualVector:
        h = check_vector(h, dim=self.dim, name="h")
        if self._matvec is not None:
            out = np.asarray(self._matvec(h), dtype=np.float64)
        else:
            out = self._matrix @ h
        if out.shape != (self.dim,):
            raise InvalidInputError(f"Hessian matvec returned shape {out.shape}")
        return out

    def quad(self, h: PrimalVector) -> float:
        """Quadratic form <B h, h>."""
        return float(np.dot(self.apply(h), h))

    def largest_eigenvalue(self, n_iter: int = 200, seed: int = 0) -> float:
        """Largest eigenvalue; exact for dense views, power iteration otherwise."""
        if self.has_matrix:
            return float(np.linalg.eigvalsh(self.matrix)[-1])
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(self.dim)
        v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(n_iter):
            w = self.apply(v)
            lam_new = float(np.dot(w, v))
            nw = np.linalg.norm(w)
            if nw == 0.0:
                return 0.0
            v = w / nw
            if abs(lam_new - lam) <= 1e-12 * max(1.0, abs(lam_new)):
                lam = lam_new
                break
            lam = lam_new
        return lam


def apply_hessian(view: HessianView, h: PrimalVector) -> DualVector:
    """Apply a Hessian view to a primal direction, with dimension checks."""
    return view.apply(h)


def operator_norm(view: HessianView, norms: NormPair) -> float:
    """Induced norm max{|<Bx, x>| : |x| <= 1} for a dense symmetric view."""
    m = view.matrix
    if norms.kind == "weighted":
        s = 1.0 / np.sqrt(norms.weights)
        m = (m * s[None, :]) * s[:, None]
    evals = np.linalg.eigvalsh(m)
    return float(max(abs(evals[0]), abs(evals[-1])))
