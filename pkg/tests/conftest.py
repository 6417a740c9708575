import numpy as np
import pytest

from aadbench.configs.preprocessing import LINEAR_PREPROCESSING
from aadbench.configs.synth import SynthConfig
from aadbench.utils.datasets.synthetic import generate_trials
from aadbench.utils.evaluators.crossval import segment_dataset
from aadbench.utils.signals.base import MultiChannel, Signal, Trial
from aadbench.utils.signals.preprocessing import filter_trial, normalize_folds


def random_trial(rng, num_samples=400, n_channels=3, fs=20.0, attended=0, n_speakers=2,
                 subject_id='s00', trial_id='t0'):
    """ Trial of white noise, the EEG weakly driven by the attended envelope. """
    envelopes = [rng.standard_normal(num_samples) for _ in range(n_speakers)]
    eeg = rng.standard_normal((num_samples, n_channels)) + 0.5 * envelopes[attended][:, None]
    return Trial(
        eeg=MultiChannel(eeg, fs),
        envelopes=[Signal(envelope, fs) for envelope in envelopes],
        attended=attended,
        subject_id=subject_id,
        trial_id=trial_id)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_trial(rng):
    def _make(**kwargs):
        return random_trial(rng, **kwargs)
    return _make


@pytest.fixture(scope='session')
def small_synth_config():
    """ Two subjects, four minutes each, four channels, almost noise-free. """
    return SynthConfig(n_channels=4, duration=240.0, fs=64.0, noise_level=0.1, n_subjects=2,
                       trf_jitter=0.0, seed=3)


@pytest.fixture(scope='session')
def small_synth_trials(small_synth_config):
    return generate_trials(small_synth_config)


@pytest.fixture(scope='session')
def linear_segments(small_synth_trials):
    """ Normalised 60 s segments at 20 Hz: three training segments of subject s00 (speaker 0 attended)
    and two held-out segments, the last one of s00 and the first one of s01 (speaker 1 attended). """
    filtered = [filter_trial(trial, LINEAR_PREPROCESSING) for trial in small_synth_trials]
    segments = [segment.view for segment in segment_dataset(filtered, 60.0)]
    first = [s for s in segments if s.subject_id == 's00']
    second = [s for s in segments if s.subject_id == 's01']
    train, test, _ = normalize_folds(first[:-1], [first[-1], second[0]])
    return train, test
