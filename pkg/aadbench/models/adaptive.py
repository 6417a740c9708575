""" Training-free lasso decision rule.

For every decision window and every speaker a lasso decoder is fitted on the window
alone; the speaker whose decoder has the largest L1 norm is taken as attended. Only
the regularisation weight is learned, by the accuracy it reaches on training windows.
"""

import logging

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from aadbench.configs.algorithm import AlgorithmConfig, MARKERS
from aadbench.configs.preprocessing import PreprocessingConfig, LINEAR_PREPROCESSING
from aadbench.models.base import BaseDecoder, Decision, argmax_decision
from aadbench.models.solvers import (
    AdmmOptions, Decoder, check_lambda_grid, default_lambda_grid, lasso_path, segment_stats, solve_lasso_admm)
from aadbench.utils.exceptions import DatasetError, ParameterError
from aadbench.utils.signals.base import MultiChannel, Signal, Trial
from aadbench.utils.signals.correlation import pearson
from aadbench.utils.signals.lags import ANTI_CAUSAL, build_lagged

console = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelSubset:
    indices: List[int]
    labels: List[str]

    @classmethod
    def resolve(cls, selection: Optional[Sequence[Union[int, str]]], channel_labels: Sequence[str]) -> 'ChannelSubset':
        """ Maps labels or positions onto the channels of a recording; None selects every channel. """
        channel_labels = list(channel_labels)
        if selection is None:
            return cls(list(range(len(channel_labels))), channel_labels)
        indices = []
        for item in selection:
            if isinstance(item, str):
                if item not in channel_labels:
                    raise ParameterError(f"Channel {item} is not part of the recording")
                indices.append(channel_labels.index(item))
            else:
                if not 0 <= int(item) < len(channel_labels):
                    raise ParameterError(f"Channel index {item} out of range for {len(channel_labels)} channels")
                indices.append(int(item))
        if len(set(indices)) != len(indices):
            raise ParameterError(f"Channel subset {list(selection)} contains duplicates")
        if len(indices) == 0:
            raise ParameterError("Channel subset is empty")
        return cls(indices, [channel_labels[i] for i in indices])


@dataclass(frozen=True)
class AdapDecision:
    decision: Decision
    decoders: List[Decoder]
    norms: List[float]
    converged: List[bool]


def _marker(decoder: Decoder, design, target: np.ndarray, marker: str) -> float:
    if marker == 'l1':
        return float(np.sum(np.abs(decoder.weights)))
    if not np.any(decoder.weights):
        return 0.0
    return pearson(design.matrix @ decoder.weights, target)


def adap_decide(window_eeg: MultiChannel, envelopes: Sequence[Signal], lambda_rel: float, L: int,
                opts: Optional[AdmmOptions] = None, marker: str = 'l1') -> AdapDecision:
    """ Fits one lasso decoder per speaker on this window and compares their markers.

    Args:
        window_eeg: EEG of the window, already restricted to the channel subset.
        envelopes: one envelope per speaker, aligned with `window_eeg`.
        lambda_rel: relative regularisation weight, anchored per speaker on ||X's_i||_inf.
        L: number of anti-causal lags.
        marker: 'l1' compares decoder L1 norms; 'correlation' compares the correlation
            between each decoder's output and its envelope.

    When every decoder is zero the decision is flagged degenerate and falls on the lowest index.
    """
    if len(envelopes) < 2:
        raise ParameterError(f"At least two envelopes are needed, got {len(envelopes)}")
    if marker not in MARKERS:
        raise ParameterError(f"Marker {marker} not available, choose from {MARKERS}")
    design = build_lagged(window_eeg, L, ANTI_CAUSAL)
    decoders, scores = [], []
    for envelope in envelopes:
        target = design.align(envelope)
        decoder = solve_lasso_admm(segment_stats(design, target), lambda_rel, opts)
        decoders.append(decoder)
        scores.append(_marker(decoder, design, target, marker))
    degenerate = all(not np.any(decoder.weights) for decoder in decoders)
    norms = [float(np.sum(np.abs(decoder.weights))) for decoder in decoders]
    return AdapDecision(argmax_decision(scores, degenerate), decoders, norms,
                        [bool(decoder.meta['converged']) for decoder in decoders])


def write_diagnostics(rows: List[Dict[str, Any]], path: str) -> None:
    """ Writes per-window diagnostics (markers, norms, convergence) as CSV. """
    try:
        pd.DataFrame.from_records(rows).to_csv(path, index=False)
    except OSError as e:
        raise DatasetError(f"Cannot write diagnostics to {path}: {e}") from e


class AdaptiveLassoDecoder(BaseDecoder):

    def __init__(
            self,
            lags: float = 0.25,
            lambda_grid: Optional[Sequence[float]] = None,
            admm_options: Optional[AdmmOptions] = None,
            channel_subset: Optional[Sequence[Union[int, str]]] = None,
            marker: str = 'l1',
            max_tuning_windows: Optional[int] = None,
            preprocessing: PreprocessingConfig = LINEAR_PREPROCESSING,
    ):
        if marker not in MARKERS:
            raise ParameterError(f"Marker {marker} not available, choose from {MARKERS}")
        self.preprocessing = preprocessing
        self.L = self.seconds_to_lags(lags, preprocessing.fs)
        self.lambda_grid = check_lambda_grid(lambda_grid if lambda_grid is not None else default_lambda_grid())
        self.admm_options = admm_options if admm_options is not None else AdmmOptions()
        self.channel_selection = channel_subset
        self.marker = marker
        self.max_tuning_windows = max_tuning_windows
        self.tuning = 'training_accuracy'
        self.lambda_rel = self.lambda_grid[0]
        self.subset: Optional[ChannelSubset] = None
        self.diagnostics: List[Dict[str, Any]] = []

    def hyperparameter_grid(self) -> List[float]:
        return list(self.lambda_grid)

    def set_hyperparameter(self, value: float) -> None:
        self.lambda_rel = float(value)

    @property
    def hyperparameter(self) -> float:
        return self.lambda_rel

    def _tuning_windows(self, segments: Sequence[Trial], window_length: Optional[int]) -> List[Trial]:
        windows = [w for segment in segments for w in self.split_windows(segment, window_length)]
        if self.max_tuning_windows is not None and len(windows) > self.max_tuning_windows:
            keep = np.linspace(0, len(windows) - 1, self.max_tuning_windows).round().astype(int)
            windows = [windows[i] for i in np.unique(keep)]
        return windows

    def fit(self, segments: Sequence[Trial], window_length: Optional[int] = None) -> 'AdaptiveLassoDecoder':
        """ Picks the weight with the highest accuracy on the training windows; ties go to the smaller weight. """
        if len(segments) == 0:
            raise ParameterError("At least one training segment is required")
        self.subset = ChannelSubset.resolve(self.channel_selection, segments[0].eeg.channel_labels)
        windows = self._tuning_windows(segments, window_length)
        correct = np.zeros(len(self.lambda_grid))
        for window in windows:
            design = build_lagged(window.eeg.select(self.subset.indices), self.L, ANTI_CAUSAL)
            scores = np.zeros((len(self.lambda_grid), window.n_speakers))
            for i, envelope in enumerate(window.envelopes):
                target = design.align(envelope)
                _, path = lasso_path(segment_stats(design, target), self.lambda_grid, self.admm_options)
                scores[:, i] = [_marker(decoder, design, target, self.marker) for decoder in path]
            for k in range(len(self.lambda_grid)):
                correct[k] += argmax_decision(scores[k]).speaker == window.attended
        best = int(np.argmax(correct))
        self.lambda_rel = self.lambda_grid[best]
        console.info(f"Selected lambda {self.lambda_rel:g} with training accuracy "
                     f"{100.0 * correct[best] / max(len(windows), 1):.2f}% on {len(windows)} windows")
        return self

    def decide(self, window: Trial) -> Decision:
        if self.subset is None:
            self.subset = ChannelSubset.resolve(self.channel_selection, window.eeg.channel_labels)
        result = adap_decide(window.eeg.select(self.subset.indices), window.envelopes, self.lambda_rel, self.L,
                             self.admm_options, self.marker)
        row = {'subject': window.subject_id, 'trial': window.trial_id, 'start': window.offset,
               'samples': len(window), 'lambda': self.lambda_rel, 'decision': result.decision.speaker,
               'attended': window.attended, 'degenerate': result.decision.degenerate, 'tie': result.decision.tie}
        for i, (norm, converged) in enumerate(zip(result.norms, result.converged)):
            row[f"l1_{i}"] = norm
            row[f"marker_{i}"] = result.decision.scores[i]
            row[f"converged_{i}"] = converged
        self.diagnostics.append(row)
        return result.decision

    @classmethod
    def from_config(cls, config: AlgorithmConfig) -> 'AdaptiveLassoDecoder':
        return cls(
            lags=config.lags,
            lambda_grid=config.lambda_grid,
            admm_options=AdmmOptions(config.admm_rho, config.admm_tol, config.admm_max_iter),
            channel_subset=config.channel_subset,
            marker=config.marker,
            max_tuning_windows=config.max_tuning_windows,
            preprocessing=config.preprocessing if config.preprocessing is not None else LINEAR_PREPROCESSING)
