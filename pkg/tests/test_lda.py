import numpy as np
import pytest

from aadbench.models.lda import fit_lda
from aadbench.utils.exceptions import ParameterError


def _two_classes(rng, n=200):
    first = rng.standard_normal((n, 3)) + np.array([1.0, 0.5, 0.0])
    second = rng.standard_normal((n, 3)) - np.array([1.0, 0.5, 0.0])
    features = np.vstack([first, second])
    labels = np.concatenate([np.ones(n, dtype=bool), np.zeros(n, dtype=bool)])
    return features, labels


class TestLda:
    """Fisher discriminant with pooled covariance."""

    def test_closed_form(self, rng):
        features, labels = _two_classes(rng)
        lda = fit_lda(features, labels, augment=False)
        first, second = features[labels], features[~labels]
        mu_1, mu_2 = first.mean(axis=0), second.mean(axis=0)
        centered = np.vstack([first - mu_1, second - mu_2])
        covariance = centered.T @ centered / (features.shape[0] - 2)
        weights = np.linalg.solve(covariance, mu_1 - mu_2)
        np.testing.assert_allclose(lda.weights, weights, rtol=1e-10)
        assert lda.bias == pytest.approx(-0.5 * weights @ (mu_1 + mu_2), rel=1e-10)
        assert not lda.regularized

    def test_separates_classes(self, rng):
        features, labels = _two_classes(rng)
        lda = fit_lda(features, labels, augment=False)
        assert np.mean(lda.predict(features) == labels) > 0.8

    def test_augmentation_zeroes_bias(self, rng):
        features = rng.standard_normal((50, 2)) + 1.0
        lda = fit_lda(features, np.ones(50, dtype=bool))
        assert lda.bias == 0.0
        assert np.all(lda.weights > 0)

    def test_singular_covariance_is_regularised(self, rng):
        features, labels = _two_classes(rng)
        features[:, 2] = features[:, 1]
        lda = fit_lda(features, labels, augment=False)
        assert lda.regularized
        assert np.all(np.isfinite(lda.weights))

    def test_one_class_only(self, rng):
        with pytest.raises(ParameterError):
            fit_lda(rng.standard_normal((10, 2)), np.ones(10, dtype=bool), augment=False)

    def test_truncate(self, rng):
        features, labels = _two_classes(rng)
        lda = fit_lda(features, labels, augment=False).truncate(2)
        assert lda.weights.shape == (2,)
