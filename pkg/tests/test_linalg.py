import numpy as np
import pytest

import grnewton as gn
from grnewton.exceptions import InvalidInputError, NumericError
from grnewton.linalg import HessianView, operator_norm


def brute_force_dual_norm(g, primal_norm, n_dirs=200_000, seed=0):
    """Maximize <g, x> over the primal unit ball by dense direction sampling."""
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n_dirs, g.shape[0]))
    best = 0.0
    for d in dirs:
        x = d / primal_norm(d)
        best = max(best, abs(float(g @ x)))
    return best


def test_dual_norm_zero_vector():
    norms = gn.euclidean_norms()
    assert gn.dual_norm(np.zeros(4), norms) == 0.0


def test_dual_norm_euclidean_pythagorean():
    norms = gn.euclidean_norms()
    assert gn.dual_norm(np.array([3.0, 4.0]), norms) == pytest.approx(5.0, rel=1e-15)


def test_dual_norm_weighted_matches_brute_force():
    # w = (1, 0.5): the dual norm of (1, 1) is sqrt(1/1 + 1/0.5) = sqrt(3).
    norms = gn.weighted_norms(np.array([1.0, 0.5]))
    g = np.array([1.0, 1.0])
    exact = gn.dual_norm(g, norms)
    assert exact == pytest.approx(np.sqrt(3.0), rel=1e-14)
    sampled = brute_force_dual_norm(g, norms.primal)
    assert sampled <= exact * (1.0 + 1e-12)
    assert sampled == pytest.approx(exact, rel=2e-3)


def test_dual_norm_rejects_non_finite():
    norms = gn.euclidean_norms()
    with pytest.raises(InvalidInputError):
        gn.dual_norm(np.array([1.0, np.nan]), norms)


@pytest.mark.parametrize(
    "norms",
    [gn.euclidean_norms(), gn.weighted_norms(np.linspace(0.2, 1.0, 6))],
    ids=["euclidean", "weighted"],
)
def test_norm_axioms_random(norms):
    rng = np.random.default_rng(7)
    for _ in range(200):
        x = rng.standard_normal(6)
        y = rng.standard_normal(6)
        a = float(rng.standard_normal())
        assert norms.primal(a * x) == pytest.approx(abs(a) * norms.primal(x), rel=1e-12)
        assert norms.primal(x + y) <= norms.primal(x) + norms.primal(y) + 1e-12
        assert norms.dual(a * x) == pytest.approx(abs(a) * norms.dual(x), rel=1e-12)
        # duality pairing
        g = rng.standard_normal(6)
        assert abs(g @ x) <= norms.dual(g) * norms.primal(x) * (1.0 + 1e-12)


def test_weighted_norms_reject_bad_weights():
    with pytest.raises(InvalidInputError):
        gn.weighted_norms(np.array([0.5, 1.5]))
    with pytest.raises(InvalidInputError):
        gn.weighted_norms(np.array([0.0, 1.0]))


def test_apply_hessian_identity():
    B = HessianView(matrix=np.eye(2))
    np.testing.assert_allclose(gn.apply_hessian(B, np.array([2.0, -1.0])), [2.0, -1.0])


def test_apply_hessian_diagonal():
    B = HessianView(matrix=np.diag([2.0, 3.0]))
    np.testing.assert_allclose(gn.apply_hessian(B, np.array([1.0, 1.0])), [2.0, 3.0])


def test_apply_hessian_dense():
    B = HessianView(matrix=np.array([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(gn.apply_hessian(B, np.array([1.0, 0.0])), [2.0, 1.0])


def test_apply_hessian_dimension_mismatch():
    B = HessianView(matrix=np.eye(3))
    with pytest.raises(InvalidInputError):
        gn.apply_hessian(B, np.ones(2))


def test_hessian_view_symmetry_and_psd(logistic_small):
    rng = np.random.default_rng(11)
    x = rng.standard_normal(logistic_small.dim)
    B = logistic_small.smooth.hessian(x)
    for _ in range(100):
        h1 = rng.standard_normal(B.dim)
        h2 = rng.standard_normal(B.dim)
        lhs = float(B.apply(h1) @ h2)
        rhs = float(B.apply(h2) @ h1)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)
        assert B.quad(h1) >= -1e-10 * float(h1 @ h1)


def test_dense_vs_operator_agreement():
    rng = np.random.default_rng(3)
    M = rng.standard_normal((5, 5))
    M = M @ M.T
    dense = HessianView(matrix=M)
    op = HessianView(matvec=lambda h: M @ h, dim=5)
    for _ in range(50):
        h = rng.standard_normal(5)
        err = np.linalg.norm(dense.apply(h) - op.apply(h))
        assert err <= 1e-10 * (1.0 + np.linalg.norm(h))


def test_operator_only_view_has_no_matrix():
    op = HessianView(matvec=lambda h: h, dim=3)
    assert not op.has_matrix
    with pytest.raises(NumericError):
        _ = op.matrix


def test_largest_eigenvalue_matches_dense():
    rng = np.random.default_rng(9)
    M = rng.standard_normal((8, 8))
    M = M @ M.T
    dense = HessianView(matrix=M)
    op = HessianView(matvec=lambda h: M @ h, dim=8)
    lam = float(np.linalg.eigvalsh(M)[-1])
    assert dense.largest_eigenvalue() == pytest.approx(lam, rel=1e-12)
    assert op.largest_eigenvalue() == pytest.approx(lam, rel=1e-6)


def test_operator_norm_weighted():
    # ||B|| in a weighted norm equals the top |eigenvalue| of W^{-1/2} B W^{-1/2}.
    w = np.array([0.25, 1.0])
    norms = gn.weighted_norms(w)
    B = HessianView(matrix=np.diag([1.0, 1.0]))
    assert operator_norm(B, norms) == pytest.approx(4.0, rel=1e-12)


def test_norms_description_round_trip():
    from grnewton.linalg import norms_from_description

    w = np.array([0.3, 0.8, 1.0])
    weighted = gn.weighted_norms(w)
    rebuilt = norms_from_description(weighted.describe())
    g = np.array([1.0, -2.0, 0.5])
    assert rebuilt.dual(g) == pytest.approx(weighted.dual(g), rel=1e-15)
    plain = norms_from_description(gn.euclidean_norms().describe())
    assert plain.kind == "euclidean"
