""" Synthetic forward-model data: EEG as TRF-filtered speech envelopes plus noise.

For channel c the EEG is

    x_c(t) = sum_l h_a,c(l) s_a(t - l) + g * sum_{u != a} sum_l h_u,c(l) s_u(t - l) + noise_c(t)

with noise_c scaled to `noise_level` times the RMS of the channel's response.
Every random stream derives from `numpy.random.SeedSequence`: the population TRFs
from [seed], the per-subject jitter from [seed, subject, 2**32 - 1] and the envelopes and
noise of a trial from [seed, subject, trial]. All arrays are rounded to float32
precision so that a dataset written to disk reloads bit-identically.
"""

import logging

from typing import List, Optional, Tuple

import numpy as np

from scipy import fft, signal

from aadbench.configs.dataset import DatasetConfig
from aadbench.configs.synth import SynthConfig
from aadbench.utils.datasets.base import BaseDataset
from aadbench.utils.datasets.directory import save_dataset
from aadbench.utils.exceptions import ParameterError
from aadbench.utils.signals.base import MultiChannel, Signal, Trial

console = logging.getLogger(__name__)

ENVELOPE_FILTER_ORDER = 4
# third entropy word of the jitter stream, outside the range of trial indices
JITTER_STREAM = 0xFFFFFFFF


def _float32(x: np.ndarray) -> np.ndarray:
    return np.asarray(x, dtype=np.float32).astype(np.float64)


def _rng(*entropy: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(e) for e in entropy]))


def trf_kernel(fs: float, trf_length: float) -> np.ndarray:
    """ Smooth biphasic kernel: one sine period under a Hann taper, spanning `trf_length` seconds. """
    num_taps = max(1, int(round(trf_length * fs)))
    t = (np.arange(num_taps) + 0.5) / fs
    taper = signal.windows.hann(num_taps + 2)[1:-1]
    return np.sin(2 * np.pi * t / trf_length) * taper


def _random_trfs(config: SynthConfig, rng: np.random.Generator, count: int) -> np.ndarray:
    kernel = trf_kernel(config.fs, config.trf_length)
    gains = rng.standard_normal((count, config.n_channels))
    return gains[:, :, None] * kernel[None, None, :]


def population_trfs(config: SynthConfig) -> Tuple[np.ndarray, np.ndarray]:
    """ Attended (C, L_h) and unattended (n_speakers - 1, C, L_h) TRFs shared by all subjects. """
    rng = _rng(config.seed)
    drawn = _random_trfs(config, rng, config.n_speakers)
    attended = np.asarray(config.attended_trf, dtype=np.float64) if config.attended_trf is not None else drawn[0]
    if config.shared_trf:
        return attended, np.repeat(attended[None], config.n_speakers - 1, axis=0)
    if config.unattended_trf is not None:
        unattended = np.asarray(config.unattended_trf, dtype=np.float64)
        return attended, np.repeat(unattended[None], config.n_speakers - 1, axis=0)
    return attended, drawn[1:]


def subject_trfs(config: SynthConfig, subject: int) -> Tuple[np.ndarray, np.ndarray]:
    """ Population TRFs perturbed by seeded Gaussian jitter relative to their RMS. """
    attended, unattended = population_trfs(config)
    if config.trf_jitter == 0:
        return attended, unattended
    rng = _rng(config.seed, subject, JITTER_STREAM)

    def _perturb(h: np.ndarray) -> np.ndarray:
        scale = float(np.sqrt(np.mean(h ** 2)))
        return h + config.trf_jitter * scale * rng.standard_normal(h.shape)

    attended = _perturb(attended)
    unattended = attended[None].repeat(len(unattended), axis=0) if config.shared_trf else _perturb(unattended)
    return attended, unattended


def generate_envelope(config: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """ Lowpass-filtered white noise shifted to be nonnegative. """
    white = rng.standard_normal(config.num_samples)
    sos = signal.butter(ENVELOPE_FILTER_ORDER, config.envelope_cutoff, btype='lowpass', output='sos', fs=config.fs)
    smooth = signal.sosfiltfilt(sos, white)
    return smooth - smooth.min()


def generate_noise(config: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """ Unit-variance (T, C) noise, white or with a 1/f power spectrum. """
    white = rng.standard_normal((config.num_samples, config.n_channels))
    if config.noise == 'white':
        return white
    freqs = fft.rfftfreq(config.num_samples, d=1.0 / config.fs)
    shaping = np.zeros_like(freqs)
    shaping[1:] = 1.0 / np.sqrt(freqs[1:])
    pink = fft.irfft(fft.rfft(white, axis=0) * shaping[:, None], n=config.num_samples, axis=0)
    return pink / np.maximum(pink.std(axis=0), 1e-12)


def _convolve(trf: np.ndarray, envelope: np.ndarray) -> np.ndarray:
    return np.stack([signal.lfilter(trf[c], [1.0], envelope) for c in range(trf.shape[0])], axis=1)


def generate_trial(
        config: SynthConfig,
        attended: int,
        subject: int = 0,
        trial: int = 0,
        trfs: Optional[Tuple[np.ndarray, np.ndarray]] = None
) -> Trial:
    """ Generates one labelled trial; identical arguments give bit-identical trials. """
    if not 0 <= attended < config.n_speakers:
        raise ParameterError(f"Attended index {attended} out of range for {config.n_speakers} speakers")
    h_attended, h_unattended = trfs if trfs is not None else subject_trfs(config, subject)
    rng = _rng(config.seed, subject, trial)
    envelopes = [_float32(generate_envelope(config, rng)) for _ in range(config.n_speakers)]

    response = _convolve(h_attended, envelopes[attended])
    unattended = [k for k in range(config.n_speakers) if k != attended]
    for h, k in zip(h_unattended, unattended):
        response = response + config.unattended_gain * _convolve(h, envelopes[k])

    noise = generate_noise(config, rng)
    rms = np.sqrt(np.mean(response ** 2, axis=0))
    rms = np.where(rms > 0, rms, np.sqrt(np.mean(response ** 2)))
    eeg = response + config.noise_level * rms[None, :] * noise

    return Trial(
        eeg=MultiChannel(_float32(eeg), config.fs),
        envelopes=[Signal(envelope, config.fs) for envelope in envelopes],
        attended=attended,
        subject_id=f"s{subject:02d}",
        trial_id=f"t{trial}")


def generate_trials(config: SynthConfig) -> List[Trial]:
    """ All trials of the configured population; the attended speaker rotates with subject and trial. """
    trials = []
    for subject in range(config.n_subjects):
        trfs = subject_trfs(config, subject)
        for trial in range(config.trials_per_subject):
            attended = (subject + trial) % config.n_speakers
            trials.append(generate_trial(config, attended, subject=subject, trial=trial, trfs=trfs))
    return trials


def generate_dataset(config: SynthConfig, out_dir: str) -> str:
    """ Generates the population and writes it as a dataset directory; returns the manifest path. """
    console.info(
        f"Generating {config.n_subjects} subjects x {config.trials_per_subject} trials "
        f"({config.duration} s, {config.n_channels} channels, seed {config.seed})")
    return save_dataset(generate_trials(config), out_dir)


class SyntheticDataset(BaseDataset):

    def __init__(self, config: SynthConfig) -> None:
        self.config = config
        super().__init__(generate_trials(config))

    @classmethod
    def from_config(cls, config: DatasetConfig) -> 'SyntheticDataset':
        return cls(config.synth)
