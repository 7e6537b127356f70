import numpy as np
import pytest

from flowbench.classifiers import (
    LinearSVMModel,
    LogisticRegressionModel,
    PerceptronModel,
    RidgeModel,
    margin,
)

SGD_CLASSES = (LinearSVMModel, LogisticRegressionModel, PerceptronModel)


def _blobs(rng, n_per_class=30, spread=0.3):
    a = rng.normal(loc=(-2.0, -2.0), scale=spread, size=(n_per_class, 2))
    b = rng.normal(loc=(2.0, 2.0), scale=spread, size=(n_per_class, 2))
    X = np.vstack([a, b])
    y = np.array([0] * n_per_class + [1] * n_per_class)
    return X, y


@pytest.mark.parametrize("cls", SGD_CLASSES)
def test_separable_blobs_reach_perfect_training_accuracy(cls, rng):
    X, y = _blobs(rng)
    model = cls(max_epochs=200, seed=1).fit(X, y)
    assert np.mean(model.predict(X) == y) == 1.0


@pytest.mark.parametrize("cls", SGD_CLASSES)
def test_constant_labels_predict_that_label(cls):
    X = np.array([[0.1, -0.3], [0.4, 0.2], [-0.5, 0.6]])
    y = np.array([2, 2, 2])
    model = cls(max_epochs=5, seed=0).fit(X, y)
    assert model.predict(X).tolist() == [2, 2, 2]


@pytest.mark.parametrize("cls", SGD_CLASSES)
def test_non_finite_features_rejected(cls):
    X = np.array([[0.0, np.nan], [1.0, 2.0]])
    y = np.array([0, 1])
    with pytest.raises(ValueError, match="non-finite"):
        cls().fit(X, y)


@pytest.mark.parametrize("cls", SGD_CLASSES)
def test_same_seed_gives_identical_weights(cls, rng):
    X, y = _blobs(rng, n_per_class=20)
    a = cls(max_epochs=30, seed=9).fit(X, y)
    b = cls(max_epochs=30, seed=9).fit(X, y)
    np.testing.assert_array_equal(a.weights_, b.weights_)
    np.testing.assert_array_equal(a.bias_, b.bias_)


def test_fitted_svm_margin_is_positive(rng):
    X, y = _blobs(rng)
    model = LinearSVMModel(max_epochs=200, seed=2).fit(X, y)
    for cls in (0, 1):
        assert margin(model, cls) > 0.0


def test_margin_hand_values():
    model = LinearSVMModel()
    model.classes_ = np.array([0, 1])
    model.n_features_ = 2
    model.weights_ = np.array([[2.0, 0.0], [0.6, 0.8]])
    model.bias_ = np.zeros(2)
    assert margin(model, 0) == pytest.approx(1.0, abs=1e-12)
    assert margin(model, 1) == pytest.approx(2.0, abs=1e-12)


def test_margin_scales_inversely_with_weight_scale():
    model = LinearSVMModel()
    model.classes_ = np.array([0])
    model.n_features_ = 3
    base = np.array([[1.0, 2.0, 2.0]])
    model.weights_ = base
    model.bias_ = np.zeros(1)
    reference = margin(model, 0)
    for c in (2.0, 5.0, 10.0):
        model.weights_ = c * base
        assert margin(model, 0) == pytest.approx(reference / c, rel=1e-12)


def test_margin_rejects_zero_weights_and_unknown_class():
    model = LinearSVMModel()
    model.classes_ = np.array([0])
    model.n_features_ = 2
    model.weights_ = np.zeros((1, 2))
    model.bias_ = np.zeros(1)
    with pytest.raises(ValueError, match="zero weight"):
        margin(model, 0)
    with pytest.raises(ValueError, match="not seen"):
        margin(model, 5)


def test_logistic_scores_are_normalized(rng):
    X, y = _blobs(rng, n_per_class=15)
    model = LogisticRegressionModel(max_epochs=20, seed=0).fit(X, y)
    scores = model.predict_scores(X)
    np.testing.assert_allclose(scores.sum(axis=1), 1.0, atol=1e-9)


# ridge -------------------------------------------------------------------------


def test_ridge_interpolates_invertible_square_system():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(3, 3))
    y = np.array([0, 1, 2])
    model = RidgeModel(lam=0.0).fit(X, y)
    targets = np.where(np.arange(3)[:, None] == np.arange(3)[None, :], 1.0, -1.0)
    residual = model.predict_scores(X) - targets
    assert float(np.mean(residual**2)) == pytest.approx(0.0, abs=1e-16)


def test_ridge_normal_equation_residual(rng):
    X = rng.normal(size=(40, 6))
    y = rng.integers(0, 3, size=40)
    model = RidgeModel(lam=1.0).fit(X, y)
    targets = np.where(y[:, None] == np.arange(3)[None, :], 1.0, -1.0)
    system = X.T @ X + np.eye(6)
    residual = system @ model.weights_.T - X.T @ targets
    assert np.linalg.norm(residual) < 1e-6


def test_ridge_shrinks_with_lambda(rng):
    X = rng.normal(size=(30, 4))
    y = rng.integers(0, 2, size=30)
    norms = [
        float(np.linalg.norm(RidgeModel(lam=lam).fit(X, y).weights_))
        for lam in (1.0, 10.0, 1000.0)
    ]
    assert norms[0] > norms[1] > norms[2]


def test_ridge_singular_at_zero_lambda_advises_regularization():
    X = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])  # duplicated column
    y = np.array([0, 1, 0])
    with pytest.raises(ValueError, match="lam > 0"):
        RidgeModel(lam=0.0).fit(X, y)
    RidgeModel(lam=1.0).fit(X, y)  # regularized system is solvable
