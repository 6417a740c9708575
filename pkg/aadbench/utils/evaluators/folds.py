""" Contiguous fold splits and the inner cross-validation used to pick hyperparameters. """

import logging
import warnings

from typing import Any, Callable, List, Sequence, Tuple

import numpy as np

from aadbench.utils.exceptions import InsufficientDataError, ParameterError

console = logging.getLogger(__name__)

INNER_FOLDS = 10


def contiguous_folds(n_items: int, n_folds: int = INNER_FOLDS) -> List[Tuple[np.ndarray, np.ndarray]]:
    """ Splits `range(n_items)` into contiguous validation blocks.

    Returns one (train indices, validation indices) pair per fold. With fewer items
    than folds, every item becomes its own fold and a warning is issued.
    """
    if n_items < 2:
        raise InsufficientDataError(f"Cross-validation needs at least two items, got {n_items}")
    if n_folds < 2:
        raise ParameterError(f"Cross-validation needs at least two folds, got {n_folds}")
    if n_items < n_folds:
        warnings.warn(f"Only {n_items} items for {n_folds}-fold cross-validation, using {n_items} folds")
        n_folds = n_items
    indices = np.arange(n_items)
    folds = []
    for block in np.array_split(indices, n_folds):
        folds.append((np.setdiff1d(indices, block), block))
    return folds


def inner_cv(
        n_items: int,
        grid: Sequence[Any],
        objective: Callable[[np.ndarray, np.ndarray, Any], float],
        n_folds: int = INNER_FOLDS
) -> Tuple[Any, List[float]]:
    """ Picks the grid value with the highest mean validation score.

    Args:
        n_items: number of training segments.
        grid: candidate values, ordered from the smallest regularisation (or component count) up.
        objective: called as objective(train_indices, validation_indices, value) and
            returning a validation accuracy.
        n_folds: number of contiguous folds.

    Returns:
        The best value (the earliest grid value among ties) and the mean score of every value.
    """
    grid = list(grid)
    if len(grid) == 0:
        raise ParameterError("Hyperparameter grid is empty")
    if len(grid) == 1:
        return grid[0], [float('nan')]

    scores = np.zeros((len(grid),), dtype=np.float64)
    folds = contiguous_folds(n_items, n_folds)
    # values vary fastest so that decoders can warm-start along the grid
    for train_idx, val_idx in folds:
        for i, value in enumerate(grid):
            scores[i] += objective(train_idx, val_idx, value)
    scores /= len(folds)
    best = int(np.argmax(scores))
    console.info(f"Inner CV selected {grid[best]} (mean accuracy {scores[best]:.2f}) over {len(folds)} folds")
    return grid[best], [float(s) for s in scores]
