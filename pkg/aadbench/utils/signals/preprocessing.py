""" Preprocessing pipelines for the linear (20 Hz, 1-9 Hz) and neural (64 Hz, 1-32 Hz) decoders.

Filtering is a pure function of one trial. Normalisation statistics are
estimated on training data only and re-applied to held-out data.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from aadbench.configs.preprocessing import PreprocessingConfig, LINEAR_PREPROCESSING, NN_PREPROCESSING
from aadbench.utils.exceptions import ParameterError
from aadbench.utils.signals.base import Trial
from aadbench.utils.signals.filters import resample, bandpass, highpass

MIN_INPUT_FS = 64.0
STD_FLOOR = 1e-12


@dataclass(frozen=True)
class NormalizationStats:
    """ Per-channel and per-envelope means and standard deviations. """

    eeg_mean: np.ndarray
    eeg_std: np.ndarray
    envelope_mean: np.ndarray
    envelope_std: np.ndarray

    @classmethod
    def fit(cls, trials: Sequence[Trial]) -> 'NormalizationStats':
        """ Pools all samples of `trials`; envelopes are pooled per speaker position. """
        if len(trials) == 0:
            raise ParameterError("Cannot estimate normalisation statistics from zero trials")
        eeg = np.concatenate([trial.eeg.data for trial in trials], axis=0)
        envelopes = np.concatenate([trial.envelope_matrix() for trial in trials], axis=1)
        return cls(
            eeg_mean=eeg.mean(axis=0),
            eeg_std=np.maximum(eeg.std(axis=0), STD_FLOOR),
            envelope_mean=envelopes.mean(axis=1),
            envelope_std=np.maximum(envelopes.std(axis=1), STD_FLOOR))

    def apply(self, trial: Trial) -> Trial:
        if trial.n_channels != self.eeg_mean.shape[0]:
            raise ParameterError(f"Statistics cover {self.eeg_mean.shape[0]} channels, trial has {trial.n_channels}")
        if trial.n_speakers != self.envelope_mean.shape[0]:
            raise ParameterError(
                f"Statistics cover {self.envelope_mean.shape[0]} speakers, trial has {trial.n_speakers}")
        eeg = trial.eeg.with_data((trial.eeg.data - self.eeg_mean) / self.eeg_std)
        envelopes = [
            envelope.with_samples((envelope.samples - self.envelope_mean[i]) / self.envelope_std[i])
            for i, envelope in enumerate(trial.envelopes)]
        return trial.replace(eeg=eeg, envelopes=envelopes, normalization=self)


def filter_trial(trial: Trial, config: PreprocessingConfig) -> Trial:
    """ Resamples EEG and envelopes to `config.fs` and band-limits them to [f_lo, f_hi].

    When the upper band edge reaches the new Nyquist frequency only the highpass
    part is applied; the resampler's anti-aliasing filter bounds the top.
    """
    eeg = resample(trial.eeg, config.fs)
    envelopes = [resample(envelope, config.fs) for envelope in trial.envelopes]
    if config.f_hi < config.fs / 2:
        eeg = bandpass(eeg, config.f_lo, config.f_hi, method=config.filter_method)
        envelopes = [bandpass(e, config.f_lo, config.f_hi, method=config.filter_method) for e in envelopes]
    else:
        eeg = highpass(eeg, config.f_lo, method=config.filter_method)
        envelopes = [highpass(e, config.f_lo, method=config.filter_method) for e in envelopes]
    return trial.replace(eeg=eeg, envelopes=envelopes)


def preprocess(trial: Trial, config: PreprocessingConfig, stats: Optional[NormalizationStats] = None) -> Trial:
    """ Filters a trial and normalises it.

    Args:
        trial: raw trial, sampled at 64 Hz or more.
        config: target rate and band.
        stats: statistics estimated on training data; when omitted they are
            estimated on this trial. The statistics used are attached to the
            returned trial as `normalization`.
    """
    if trial.fs < MIN_INPUT_FS:
        raise ParameterError(f"Trials must be sampled at {MIN_INPUT_FS} Hz or more, got {trial.fs} Hz")
    filtered = filter_trial(trial, config)
    if not config.normalize:
        return filtered
    if stats is None:
        stats = NormalizationStats.fit([filtered])
    return stats.apply(filtered)


def preprocess_linear(trial: Trial, stats: Optional[NormalizationStats] = None) -> Trial:
    return preprocess(trial, LINEAR_PREPROCESSING, stats)


def preprocess_nn(trial: Trial, stats: Optional[NormalizationStats] = None) -> Trial:
    return preprocess(trial, NN_PREPROCESSING, stats)


def normalize_folds(train: List[Trial], test: List[Trial]):
    """ Fits statistics on `train` and applies them to both lists. """
    stats = NormalizationStats.fit(train)
    return [stats.apply(t) for t in train], [stats.apply(t) for t in test], stats
