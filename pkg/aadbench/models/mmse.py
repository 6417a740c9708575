""" Backward (stimulus reconstruction) MMSE decoders with ridge or lasso regularisation.

Two ways of pooling K training segments:
    avgdec   one decoder per segment (per-segment scale anchors), then the unweighted mean
    avgcorr  statistics summed over segments, then one solve (equivalent to concatenating the data)
"""

import logging

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.configs.preprocessing import PreprocessingConfig, LINEAR_PREPROCESSING
from aadbench.models.base import BaseDecoder, Decision, argmax_decision
from aadbench.models.solvers import (
    AdmmOptions, Decoder, SegmentStats, default_lambda_grid, check_lambda_grid,
    segment_stats, solve_lasso_admm, solve_ridge, sum_stats)
from aadbench.utils.exceptions import AADError, ParameterError
from aadbench.utils.signals.base import Signal, Trial
from aadbench.utils.signals.correlation import pearson
from aadbench.utils.signals.lags import ANTI_CAUSAL, LaggedDesign, build_lagged

console = logging.getLogger(__name__)

FLAVORS = ('avgcorr', 'avgdec')
PENALTIES = ('ridge', 'lasso')


def _solve(stats: SegmentStats, lambda_rel: float, penalty: str, opts: Optional[AdmmOptions] = None,
           warm_start: Optional[np.ndarray] = None) -> Decoder:
    if penalty == 'ridge':
        return solve_ridge(stats, lambda_rel)
    if penalty == 'lasso':
        return solve_lasso_admm(stats, lambda_rel, opts, warm_start=warm_start)
    raise ParameterError(f"Penalty {penalty} not available, choose from {PENALTIES}")


def _stats_list(segments) -> List[SegmentStats]:
    if len(segments) == 0:
        raise ParameterError("At least one training segment is required")
    return [st if isinstance(st, SegmentStats) else segment_stats(*st) for st in segments]


def train_avgdec(segments, lambda_rel: float, penalty: str = 'ridge', opts: Optional[AdmmOptions] = None) -> Decoder:
    """ Solves every segment separately and averages the K decoders. """
    stats = _stats_list(segments)
    decoders = []
    for k, st in enumerate(stats):
        try:
            decoders.append(_solve(st, lambda_rel, penalty, opts))
        except AADError as e:
            raise type(e)(f"Training segment {k}: {e}") from e
    weights = np.mean(np.stack([decoder.weights for decoder in decoders]), axis=0)
    meta = {'flavor': 'avgdec', 'penalty': penalty, 'lambda': float(lambda_rel), 'segments': len(decoders)}
    if penalty == 'lasso':
        meta['converged'] = all(decoder.meta['converged'] for decoder in decoders)
    return Decoder(weights, *stats[0].shape, meta=meta)


def train_avgcorr(segments, lambda_rel: float, penalty: str = 'ridge', opts: Optional[AdmmOptions] = None,
                  warm_start: Optional[np.ndarray] = None) -> Decoder:
    """ Sums the statistics of all segments and solves once with the global scale anchor. """
    decoder = _solve(sum_stats(_stats_list(segments)), lambda_rel, penalty, opts, warm_start)
    decoder.meta.update(flavor='avgcorr', segments=len(segments))
    return decoder


def reconstruct(d: Decoder, X: LaggedDesign) -> Signal:
    """ Row-wise product of the design with the decoder; sample k belongs to time X.first_index + k. """
    if X.cols != d.weights.shape[0]:
        raise ParameterError(f"Design has {X.cols} columns but the decoder {d.weights.shape[0]} weights")
    return Signal(X.matrix @ d.weights, X.fs)


def decide(s_hat: Signal, envelopes: Sequence[Signal], window: Optional[Tuple[int, int]] = None) -> Decision:
    """ Picks the speaker whose envelope correlates best with the reconstruction on `window`. """
    if len(envelopes) < 2:
        raise ParameterError(f"At least two envelopes are needed, got {len(envelopes)}")
    start, end = window if window is not None else (0, len(s_hat))
    if not 0 <= start <= end <= len(s_hat):
        raise ParameterError(f"Window [{start}, {end}) outside a reconstruction of {len(s_hat)} samples")
    if end - start < 2:
        # too few rows for a correlation
        return argmax_decision([0.0] * len(envelopes), degenerate=True)
    scores, flags = [], []
    for envelope in envelopes:
        samples = envelope.samples if isinstance(envelope, Signal) else np.asarray(envelope)
        if samples.shape[0] != len(s_hat):
            raise ParameterError(f"Envelope has {samples.shape[0]} samples, the reconstruction {len(s_hat)}")
        rho, degenerate = pearson(s_hat.samples[start:end], samples[start:end], return_degenerate=True)
        scores.append(rho)
        flags.append(degenerate)
    return argmax_decision(scores, degenerate=all(flags))


def window_design(window: Trial, L: int) -> Tuple[LaggedDesign, List[Signal]]:
    """ Anti-causal EEG design of a window and the envelopes aligned with its rows. """
    design = build_lagged(window.eeg, L, ANTI_CAUSAL)
    envelopes = [Signal(design.align(envelope), window.fs) for envelope in window.envelopes]
    return design, envelopes


class MmseDecoder(BaseDecoder):

    def __init__(
            self,
            flavor: str = 'avgcorr',
            penalty: str = 'ridge',
            lags: float = 0.25,
            lambda_grid: Optional[Sequence[float]] = None,
            admm_options: Optional[AdmmOptions] = None,
            preprocessing: PreprocessingConfig = LINEAR_PREPROCESSING,
    ):
        if flavor not in FLAVORS:
            raise ParameterError(f"Flavor {flavor} not available, choose from {FLAVORS}")
        if penalty not in PENALTIES:
            raise ParameterError(f"Penalty {penalty} not available, choose from {PENALTIES}")
        self.flavor = flavor
        self.penalty = penalty
        self.preprocessing = preprocessing
        self.L = self.seconds_to_lags(lags, preprocessing.fs)
        self.lambda_grid = check_lambda_grid(lambda_grid if lambda_grid is not None else default_lambda_grid())
        self.admm_options = admm_options if admm_options is not None else AdmmOptions()
        self.tuning = 'global' if flavor == 'avgcorr' else 'per_tau'
        self.lambda_rel = self.lambda_grid[0]
        self.decoder: Optional[Decoder] = None
        self._cache: Dict[tuple, SegmentStats] = {}
        self._warm: Optional[Tuple[tuple, float, np.ndarray]] = None

    def hyperparameter_grid(self) -> List[float]:
        return list(self.lambda_grid)

    def set_hyperparameter(self, value: float) -> None:
        self.lambda_rel = float(value)

    @property
    def hyperparameter(self) -> float:
        return self.lambda_rel

    def reset(self) -> None:
        self._cache = {}
        self._warm = None

    def _stats(self, segment: Trial) -> SegmentStats:
        if segment.key not in self._cache:
            design = build_lagged(segment.eeg, self.L, ANTI_CAUSAL)
            target = design.align(segment.envelopes[segment.attended])
            self._cache[segment.key] = segment_stats(design, target)
        return self._cache[segment.key]

    def fit(self, segments: Sequence[Trial], window_length: Optional[int] = None) -> 'MmseDecoder':
        if len(segments) == 0:
            raise ParameterError("At least one training segment is required")
        if self.flavor == 'avgcorr':
            stats = [self._stats(segment) for segment in segments]
            keys = tuple(segment.key for segment in segments)
            warm = None
            if self.penalty == 'lasso' and self._warm is not None:
                warm_keys, warm_lambda, warm_weights = self._warm
                if warm_keys == keys and warm_lambda < self.lambda_rel:
                    warm = warm_weights
            self.decoder = train_avgcorr(stats, self.lambda_rel, self.penalty, self.admm_options, warm_start=warm)
            self._warm = (keys, self.lambda_rel, self.decoder.weights)
        else:
            windows = [w for segment in segments for w in self.split_windows(segment, window_length)]
            stats = [self._stats(w) for w in windows]
            self.decoder = train_avgdec(stats, self.lambda_rel, self.penalty, self.admm_options)
        self.decoder.channel_labels = list(segments[0].eeg.channel_labels)
        console.debug(f"Fitted {self.flavor} {self.penalty} decoder on {len(segments)} segments, lambda={self.lambda_rel:g}")
        return self

    def decide(self, window: Trial) -> Decision:
        if self.decoder is None:
            raise ParameterError("Decoder is not fitted")
        design, envelopes = window_design(window, self.L)
        return decide(reconstruct(self.decoder, design), envelopes)

    def decide_segment(self, segment: Trial, window_length: int) -> List[Decision]:
        """ Reconstructs the whole segment once, then decides each window on its own rows. """
        if self.decoder is None:
            raise ParameterError("Decoder is not fitted")
        design, envelopes = window_design(segment, self.L)
        s_hat = reconstruct(self.decoder, design)
        decisions = []
        for start, end in self.window_bounds(len(segment), window_length):
            lo, hi = self.window_rows(design.first_index, design.rows, start, end)
            decisions.append(decide(s_hat, envelopes, (lo, hi)))
        return decisions

    @classmethod
    def from_config(cls, config: AlgorithmConfig) -> 'MmseDecoder':
        _, flavor, penalty = config.algorithm_name.split('_')
        return cls(
            flavor=flavor,
            penalty=penalty,
            lags=config.lags,
            lambda_grid=config.lambda_grid,
            admm_options=AdmmOptions(config.admm_rho, config.admm_tol, config.admm_max_iter),
            preprocessing=config.preprocessing if config.preprocessing is not None else LINEAR_PREPROCESSING)
