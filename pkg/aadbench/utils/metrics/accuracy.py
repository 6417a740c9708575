from typing import Iterable, Tuple

import numpy as np

from scipy import stats

from aadbench.utils.exceptions import ParameterError


def accuracy(decisions: Iterable[Tuple[int, int]]) -> float:
    """ Percentage of (predicted, truth) pairs that agree. """
    decisions = list(decisions)
    if len(decisions) == 0:
        raise ParameterError("Accuracy of zero decisions is undefined")
    correct = sum(int(predicted) == int(truth) for predicted, truth in decisions)
    return 100.0 * correct / len(decisions)


def binomial_interval(n_decisions: int, p: float = 0.5, confidence: float = 0.95) -> Tuple[float, float]:
    """ Central interval (in percent) of the accuracy of `n_decisions` independent guesses with success rate `p`. """
    if n_decisions < 1:
        raise ParameterError(f"Need at least one decision, got {n_decisions}")
    lo, hi = stats.binom.interval(confidence, n_decisions, p)
    return 100.0 * lo / n_decisions, 100.0 * hi / n_decisions


def chance_level(n_decisions: int, alpha: float = 0.05, n_speakers: int = 2) -> float:
    """ Accuracy (percent) that random guessing over `n_decisions` windows exceeds with probability at most `alpha`. """
    if n_decisions < 1:
        raise ParameterError(f"Need at least one decision, got {n_decisions}")
    if not 0 < alpha < 1:
        raise ParameterError(f"Significance level must lie in (0, 1), got {alpha}")
    return 100.0 * float(stats.binom.ppf(1.0 - alpha, n_decisions, 1.0 / n_speakers)) / n_decisions


def standard_error(values: Iterable[float]) -> float:
    """ Standard error of the mean (ddof = 1); NaN for fewer than two values. """
    values = np.asarray(list(values), dtype=np.float64)
    if values.shape[0] < 2:
        return float('nan')
    return float(np.std(values, ddof=1) / np.sqrt(values.shape[0]))
