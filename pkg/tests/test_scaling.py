import numpy as np
import pytest

import grnewton as gn
from grnewton.exceptions import InvalidInputError
from grnewton.scaling import EuclideanScaling, WeightedScaling

EUCLID = EuclideanScaling()
WEIGHTED = WeightedScaling(np.array([1.0, 0.5]))


def test_bregman_vanishes_on_diagonal():
    x = np.array([0.7, -1.3])
    assert gn.bregman(EUCLID, x, x) == 0.0
    assert gn.bregman(WEIGHTED, x, x) == 0.0


def test_bregman_euclidean_half_squared_distance():
    x = np.zeros(2)
    y = np.array([3.0, 4.0])
    assert gn.bregman(EUCLID, x, y) == pytest.approx(12.5, rel=1e-15)


def test_bregman_weighted_direct_evaluation():
    # d(x) = (1*x1^2 + 0.5*x2^2)/2 at y=(2,2) from x=0: (4 + 2)/2 = 3.
    x = np.zeros(2)
    y = np.array([2.0, 2.0])
    assert gn.bregman(WEIGHTED, x, y) == pytest.approx(3.0, rel=1e-15)


def test_bregman_gradient_gap_examples():
    x = np.array([1.0, 1.0])
    np.testing.assert_allclose(gn.bregman_gradient_gap(EUCLID, x, x), [0.0, 0.0])
    np.testing.assert_allclose(
        gn.bregman_gradient_gap(EUCLID, x, np.array([0.5, 1.0])), [-0.5, 0.0]
    )
    np.testing.assert_allclose(
        gn.bregman_gradient_gap(WEIGHTED, np.zeros(2), np.array([2.0, 2.0])), [2.0, 1.0]
    )


def _norms_for(scaling):
    # Both shipped scalings are certified against the Euclidean norm pair.
    return gn.euclidean_norms()


@pytest.mark.parametrize(
    "scaling",
    [EuclideanScaling(), WeightedScaling(np.linspace(0.3, 1.0, 4))],
    ids=["euclidean", "weighted"],
)
def test_scaling_axioms_on_random_pairs(scaling):
    norms = _norms_for(scaling)
    rng = np.random.default_rng(13)
    dim = 4 if isinstance(scaling, WeightedScaling) else 3
    for _ in range(1000):
        x = 3.0 * rng.standard_normal(dim)
        y = 3.0 * rng.standard_normal(dim)
        gap = scaling.value(y) - scaling.value(x) - float(
            scaling.gradient(x) @ (y - x)
        )
        # strong convexity with modulus sigma
        assert gap >= 0.5 * scaling.sigma * norms.primal(y - x) ** 2 - 1e-10
        # 1-Lipschitz gradient
        lip = norms.dual(scaling.gradient(x) - scaling.gradient(y))
        assert lip <= norms.primal(x - y) * (1.0 + 1e-10)
        # induced distance dominates the squared norm
        rho = gn.bregman(scaling, x, y)
        assert rho >= 0.5 * scaling.sigma * norms.primal(y - x) ** 2 - 1e-10


@pytest.mark.parametrize(
    "scaling",
    [EuclideanScaling(), WeightedScaling(np.linspace(0.3, 1.0, 4))],
    ids=["euclidean", "weighted"],
)
def test_bregman_directional_derivative(scaling):
    # d/dt rho(x, y + t h) at t=0 equals <grad d(y) - grad d(x), h>.
    rng = np.random.default_rng(5)
    dim = 4 if isinstance(scaling, WeightedScaling) else 3
    eps = 1e-6
    for _ in range(50):
        x = rng.standard_normal(dim)
        y = rng.standard_normal(dim)
        h = rng.standard_normal(dim)
        fd = (gn.bregman(scaling, x, y + eps * h) - gn.bregman(scaling, x, y - eps * h)) / (
            2.0 * eps
        )
        exact = float(gn.bregman_gradient_gap(scaling, x, y) @ h)
        assert fd == pytest.approx(exact, rel=1e-6, abs=1e-9)


def test_weighted_scaling_sigma_defaults_to_min_weight():
    s = WeightedScaling(np.array([0.4, 0.9]))
    assert s.sigma == pytest.approx(0.4)
    s2 = WeightedScaling(np.array([0.4, 0.9]), sigma=1.0)
    assert s2.sigma == 1.0


def test_weighted_scaling_rejects_bad_weights():
    with pytest.raises(InvalidInputError):
        WeightedScaling(np.array([0.5, 1.2]))
    with pytest.raises(InvalidInputError):
        WeightedScaling(np.array([0.5, -0.1]))


def test_bregman_overflow_raises():
    from grnewton.exceptions import NumericError

    big = np.array([1e200, 1e200])
    with pytest.raises(NumericError):
        gn.bregman(EUCLID, -big, big)


def test_scaling_description_round_trip():
    from grnewton.scaling import scaling_from_description

    w = np.linspace(0.4, 1.0, 3)
    rebuilt = scaling_from_description(WeightedScaling(w, sigma=0.35).describe())
    assert isinstance(rebuilt, WeightedScaling)
    assert rebuilt.sigma == pytest.approx(0.35)
    np.testing.assert_allclose(rebuilt.weights, w)
    assert isinstance(scaling_from_description({"kind": "euclidean"}), EuclideanScaling)
