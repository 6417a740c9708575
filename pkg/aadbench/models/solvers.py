""" Regularised least-squares solvers for spatio-temporal decoders.

Both solvers work on sufficient statistics (R = X'X, r = X's) so that training
on many segments reduces to summing statistics before a single solve.

Regularisation weights are relative:
    ridge   (R + lambda * z * I) d = r,                 z = trace(R) / n
    lasso   min_d 1/2 ||s - X d||^2 + lambda * q ||d||_1,  q = ||r||_inf
With this scaling lambda >= 1 yields the all-zero lasso solution exactly.

Sources:
    [1] https://github.com/fdtomasi/regain (admm_lasso.py), cached-factorisation ADMM for the lasso
"""

import warnings

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from scipy import linalg

from aadbench.utils.data import read_blocks, write_blocks
from aadbench.utils.exceptions import ParameterError, SingularSystemError
from aadbench.utils.signals.lags import LaggedDesign

DECODER_DESCRIPTOR = 'decoder.json'


@dataclass
class Decoder:
    """ Spatio-temporal weight vector of length L * n_channels, channel-major. """

    weights: np.ndarray
    L: int
    n_channels: int
    meta: Dict[str, Any] = field(default_factory=dict)
    channel_labels: Optional[List[str]] = None

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64).ravel()
        if self.weights.shape[0] != self.L * self.n_channels:
            raise ParameterError(
                f"Decoder holds {self.weights.shape[0]} weights, expected L * C = {self.L * self.n_channels}")
        if not np.all(np.isfinite(self.weights)):
            raise ParameterError("Decoder weights must be finite")

    def as_matrix(self) -> np.ndarray:
        """ Weights as a (C, L) array; row c holds the lags of channel c. """
        return self.weights.reshape(self.n_channels, self.L)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, meta: Optional[Dict[str, Any]] = None, **kwargs) -> 'Decoder':
        matrix = np.asarray(matrix, dtype=np.float64)
        return cls(matrix.reshape(-1), L=matrix.shape[1], n_channels=matrix.shape[0], meta=meta or {}, **kwargs)

    def save_pretrained(self, save_directory: str) -> None:
        """ JSON descriptor plus the weights as a float32 AADM block. """
        descriptor = {
            'L': self.L, 'n_channels': self.n_channels, 'channel_labels': self.channel_labels, 'meta': self.meta}
        write_blocks(save_directory, DECODER_DESCRIPTOR, descriptor, {'weights': self.weights})

    @classmethod
    def load_pretrained(cls, save_directory: str) -> 'Decoder':
        descriptor, blocks = read_blocks(save_directory, DECODER_DESCRIPTOR)
        return cls(blocks['weights'][:, 0], descriptor['L'], descriptor['n_channels'], descriptor['meta'],
                   descriptor['channel_labels'])


@dataclass(frozen=True)
class SegmentStats:
    """ Unnormalised auto- and cross-correlation of one (or a sum of) segment(s).

    `ss` is the target energy s's, kept so lasso objectives can be evaluated from statistics.
    """

    Rxx: np.ndarray
    rxs: np.ndarray
    nsamples: int
    ss: float = 0.0
    L: int = 1
    n_channels: Optional[int] = None

    @property
    def dim(self) -> int:
        return self.rxs.shape[0]

    @property
    def shape(self) -> Tuple[int, int]:
        """ (L, n_channels) of the underlying design. """
        return self.L, self.n_channels if self.n_channels is not None else self.dim // self.L


@dataclass(frozen=True)
class AdmmOptions:
    rho: float = 1.0
    tol: float = 1e-6
    max_iter: int = 2000

    def __post_init__(self):
        if not self.rho > 0:
            raise ParameterError(f"ADMM penalty rho must be positive, got {self.rho}")
        if not self.tol > 0 or self.max_iter < 1:
            raise ParameterError(f"Invalid ADMM stopping rule tol={self.tol}, max_iter={self.max_iter}")


def segment_stats(X: Union[LaggedDesign, np.ndarray], s, L: Optional[int] = None, n_channels: Optional[int] = None) -> SegmentStats:
    """ R = X'X, r = X's for one segment; a LaggedDesign supplies L and the channel count. """
    if isinstance(X, LaggedDesign):
        L, n_channels, matrix = X.L, X.n_channels, X.matrix
    else:
        matrix = np.asarray(X, dtype=np.float64)
        if matrix.ndim != 2:
            raise ParameterError(f"Design must be two-dimensional, got shape {matrix.shape}")
        L = L if L is not None else 1
        n_channels = n_channels if n_channels is not None else matrix.shape[1] // L
    s = np.asarray(s, dtype=np.float64).ravel()
    if matrix.shape[0] != s.shape[0]:
        raise ParameterError(f"Design has {matrix.shape[0]} rows but the target has {s.shape[0]} samples")
    if matrix.shape[0] == 0:
        raise ParameterError("Cannot compute statistics of an empty segment")
    Rxx = matrix.T @ matrix
    Rxx = 0.5 * (Rxx + Rxx.T)
    return SegmentStats(Rxx, matrix.T @ s, matrix.shape[0], float(s @ s), L, n_channels)


def sum_stats(stats: Sequence[SegmentStats]) -> SegmentStats:
    """ Sums statistics in the given order with one stacked reduction.

    Callers pass segments in a fixed order, so the result does not depend on how
    the statistics were computed or by which worker.
    """
    if len(stats) == 0:
        raise ParameterError("Cannot sum zero segment statistics")
    first = stats[0]
    if any(st.dim != first.dim for st in stats):
        raise ParameterError("Segment statistics have different dimensions")
    return SegmentStats(
        Rxx=np.sum(np.stack([st.Rxx for st in stats]), axis=0),
        rxs=np.sum(np.stack([st.rxs for st in stats]), axis=0),
        nsamples=int(sum(st.nsamples for st in stats)),
        ss=float(np.sum([st.ss for st in stats])),
        L=first.L,
        n_channels=first.n_channels)


def _as_stats(stats) -> SegmentStats:
    if isinstance(stats, SegmentStats):
        return stats
    if isinstance(stats, (tuple, list)) and len(stats) == 2:
        return segment_stats(*stats)
    raise ParameterError("Expected SegmentStats or a (design, target) pair")


def ridge_scale(stats: SegmentStats) -> float:
    return float(np.trace(stats.Rxx)) / stats.dim


def solve_ridge(stats, lambda_rel: float) -> Decoder:
    """ Solves (R + lambda * z * I) d = r with z = trace(R) / (L * C).

    Raises:
        SingularSystemError: if the system is singular, e.g. rank-deficient R at lambda = 0.
    """
    stats = _as_stats(stats)
    if lambda_rel < 0:
        raise ParameterError(f"Regularisation weight must be non-negative, got {lambda_rel}")
    n = stats.dim
    z = ridge_scale(stats)
    if lambda_rel == 0:
        rank = int(np.linalg.matrix_rank(stats.Rxx))
        if rank < n:
            raise SingularSystemError(
                f"Autocorrelation matrix has rank {rank} < dimension {n}; use a positive regularisation weight")
    if z == 0:
        raise SingularSystemError(f"Autocorrelation matrix is zero (dimension {n})")
    A = stats.Rxx + lambda_rel * z * np.eye(n)
    try:
        d = linalg.solve(A, stats.rxs, assume_a='pos')
    except linalg.LinAlgError as e:
        raise SingularSystemError(f"Regularised system of dimension {n} is not positive definite: {e}") from e
    return Decoder(d, *stats.shape, meta={'penalty': 'ridge', 'lambda': float(lambda_rel), 'z': z})


def lasso_scale(stats: SegmentStats) -> float:
    return float(np.max(np.abs(stats.rxs)))


def lasso_objective(stats, d: np.ndarray, lambda_rel: float) -> float:
    """ 1/2 ||s - X d||^2 + lambda * q ||d||_1, evaluated from statistics. """
    stats = _as_stats(stats)
    d = np.asarray(d, dtype=np.float64)
    residual = 0.5 * (d @ stats.Rxx @ d) - d @ stats.rxs + 0.5 * stats.ss
    return float(residual + lambda_rel * lasso_scale(stats) * np.sum(np.abs(d)))


def soft_threshold(x: np.ndarray, kappa: float) -> np.ndarray:
    return np.maximum(0, x - kappa) - np.maximum(0, -x - kappa)


def solve_lasso_admm(
        stats,
        lambda_rel: float,
        opts: Optional[AdmmOptions] = None,
        warm_start: Optional[np.ndarray] = None
) -> Decoder:
    """ Lasso by ADMM with a cached Cholesky factorisation.

    The penalty rho is relative to the mean eigenvalue of R, so convergence does not
    depend on the data scale. Convergence is reached when the primal and dual residuals
    drop below `tol` relative to the iterate norms; otherwise the last iterate is returned
    with meta['converged'] = False.
    """
    stats = _as_stats(stats)
    opts = opts if opts is not None else AdmmOptions()
    if lambda_rel < 0:
        raise ParameterError(f"Regularisation weight must be non-negative, got {lambda_rel}")
    n = stats.dim
    q = lasso_scale(stats)
    threshold = lambda_rel * q
    meta = {'penalty': 'lasso', 'lambda': float(lambda_rel), 'q': q}

    # zero is optimal iff ||X's||_inf <= lambda * q
    if q == 0 or threshold >= q:
        meta.update(converged=True, iterations=0, primal_residual=0.0, dual_residual=0.0)
        return Decoder(np.zeros(n), *stats.shape, meta=meta)

    scale = float(np.trace(stats.Rxx)) / n
    rho = opts.rho * (scale if scale > 0 else 1.0)
    factor = linalg.cho_factor(stats.Rxx + rho * np.eye(n), lower=True)

    z = np.zeros(n) if warm_start is None else np.asarray(warm_start, dtype=np.float64).copy()
    u = np.zeros(n)
    converged = False
    primal = dual = np.inf
    iteration = 0
    for iteration in range(1, opts.max_iter + 1):
        x = linalg.cho_solve(factor, stats.rxs + rho * (z - u))
        z_old = z
        z = soft_threshold(x + u, threshold / rho)
        u = u + x - z

        primal = float(np.linalg.norm(x - z))
        dual = float(rho * np.linalg.norm(z - z_old))
        if primal <= opts.tol * max(1.0, np.linalg.norm(x), np.linalg.norm(z)) and \
                dual <= opts.tol * max(1.0, rho * np.linalg.norm(u)):
            converged = True
            break

    if not converged:
        warnings.warn(
            f"ADMM did not converge in {opts.max_iter} iterations at lambda={lambda_rel:g} "
            f"(primal {primal:.2e}, dual {dual:.2e})", RuntimeWarning)
    meta.update(converged=converged, iterations=iteration, primal_residual=primal, dual_residual=dual)
    return Decoder(z, *stats.shape, meta=meta)


def default_lambda_grid(num: int = 10, lo: float = 1e-6, hi: float = 1.0) -> List[float]:
    """ `num` log-spaced relative weights from `lo` to `hi`, both included. """
    return [float(v) for v in np.logspace(np.log10(lo), np.log10(hi), num)]


def check_lambda_grid(values: Sequence[float]) -> List[float]:
    values = [float(v) for v in values]
    if len(values) == 0:
        raise ParameterError("Regularisation grid is empty")
    if any(v < 0 for v in values) or any(b <= a for a, b in zip(values, values[1:])):
        raise ParameterError(f"Regularisation grid must be non-negative and strictly increasing, got {values}")
    return values


def ridge_path(stats, grid: Sequence[float]) -> Tuple[List[float], List[Decoder]]:
    grid = check_lambda_grid(grid)
    return grid, [solve_ridge(stats, lam) for lam in grid]


def lasso_path(stats, grid: Sequence[float], opts: Optional[AdmmOptions] = None) -> Tuple[List[float], List[Decoder]]:
    """ Lasso solutions along the grid, each warm-started from the previous one. """
    grid = check_lambda_grid(grid)
    decoders, previous = [], None
    for lam in grid:
        decoder = solve_lasso_admm(stats, lam, opts, warm_start=previous)
        decoders.append(decoder)
        previous = decoder.weights
    return grid, decoders
