from typing import Tuple, Union

import numpy as np

from aadbench.utils.exceptions import ParameterError

ZERO_VARIANCE_TOL = 1e-12


def _is_constant(centered: np.ndarray, original: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(original))))
    return float(np.linalg.norm(centered)) <= ZERO_VARIANCE_TOL * scale * np.sqrt(original.shape[0])


def pearson(a, b, return_degenerate: bool = False) -> Union[float, Tuple[float, bool]]:
    """ Sample Pearson correlation coefficient of two equally long sequences.

    A zero-variance argument yields 0.0; with `return_degenerate` the result is
    returned together with a flag telling whether that happened.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ParameterError(f"Sequences must have equal lengths, got {a.shape[0]} and {b.shape[0]}")
    if a.shape[0] < 2:
        raise ParameterError("Pearson correlation needs at least two samples")

    ac = a - a.mean()
    bc = b - b.mean()
    degenerate = _is_constant(ac, a) or _is_constant(bc, b)
    if degenerate:
        rho = 0.0
    else:
        rho = float(np.dot(ac, bc) / (np.linalg.norm(ac) * np.linalg.norm(bc)))
        rho = min(1.0, max(-1.0, rho))
    if return_degenerate:
        return rho, degenerate
    return rho


def pearson_columns(A: np.ndarray, B: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """ Column-wise Pearson correlations of two (T, J) arrays and their degenerate flags. """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape:
        raise ParameterError(f"Arrays must have equal shapes, got {A.shape} and {B.shape}")
    out = [pearson(A[:, j], B[:, j], return_degenerate=True) for j in range(A.shape[1])]
    rho = np.array([r for r, _ in out], dtype=np.float64)
    flags = np.array([d for _, d in out], dtype=bool)
    return rho, flags
