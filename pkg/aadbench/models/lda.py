""" Two-class linear discriminant analysis with a pooled covariance.

Sources:
    [1] https://github.com/ppham27/MLaPP-solutions (DiscriminantAnalysis.py), class means and
        pooled within-class covariance
"""

import logging

from dataclasses import dataclass

import numpy as np

from scipy import linalg

from aadbench.utils.exceptions import ParameterError

console = logging.getLogger(__name__)

SINGULAR_RIDGE = 1e-6
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class LdaClassifier:
    weights: np.ndarray
    bias: float
    regularized: bool = False

    def decision_function(self, features: np.ndarray) -> np.ndarray:
        """ Positive scores favour the first class. """
        return np.asarray(features, dtype=np.float64) @ self.weights + self.bias

    def predict(self, features: np.ndarray) -> np.ndarray:
        return self.decision_function(features) > 0

    def truncate(self, J: int) -> 'LdaClassifier':
        return LdaClassifier(self.weights[:J].copy(), self.bias, self.regularized)


def _pooled_covariance(first: np.ndarray, second: np.ndarray, mu_first: np.ndarray, mu_second: np.ndarray) -> np.ndarray:
    centered = np.concatenate([first - mu_first, second - mu_second], axis=0)
    dof = max(centered.shape[0] - 2, 1)
    return centered.T @ centered / dof


def fit_lda(features: np.ndarray, labels: np.ndarray, augment: bool = True) -> LdaClassifier:
    """ Fits w = S^-1 (mu_1 - mu_2) and the midpoint bias.

    Args:
        features: (n, J) feature vectors.
        labels: n booleans, True for the first class.
        augment: adds every feature negated with the opposite label. The augmented set
            is symmetric under negation, so the class means are exact negatives and the
            bias is exactly zero.
    """
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    labels = np.asarray(labels, dtype=bool).ravel()
    if features.shape[0] != labels.shape[0]:
        raise ParameterError(f"Got {features.shape[0]} feature vectors and {labels.shape[0]} labels")
    J = features.shape[1]

    if augment:
        first = np.concatenate([features[labels], -features[~labels]], axis=0)
        second = -first
    else:
        first, second = features[labels], features[~labels]
    if first.shape[0] == 0 or second.shape[0] == 0:
        raise ParameterError("Both classes must be present to fit an LDA classifier")

    mu_first = first.mean(axis=0)
    mu_second = second.mean(axis=0)
    covariance = _pooled_covariance(first, second, mu_first, mu_second)

    regularized = False
    eigenvalues = linalg.eigvalsh(covariance)
    if eigenvalues[0] <= 0 or eigenvalues[-1] / eigenvalues[0] > MAX_CONDITION:
        scale = float(np.trace(covariance)) / J
        covariance = covariance + SINGULAR_RIDGE * (scale if scale > 0 else 1.0) * np.eye(J)
        regularized = True
        console.info(f"Pooled covariance is singular, adding a ridge of {SINGULAR_RIDGE:g} x trace / J")

    weights = linalg.solve(covariance, mu_first - mu_second, assume_a='pos')
    bias = -0.5 * float(weights @ (mu_first + mu_second))
    return LdaClassifier(weights, bias, regularized)
