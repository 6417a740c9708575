""" Immutable containers for single- and multi-channel recordings.

Samples are stored as float64 numpy arrays; multi-channel data is laid out
time x channels, the same orientation as the on-disk matrix format.
"""

from dataclasses import dataclass, field, replace
from typing import Any, List, Optional, Sequence

import numpy as np

from aadbench.utils.exceptions import ParameterError


def _as_readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Signal:
    """A single real-valued sequence sampled at `fs` Hz."""

    samples: np.ndarray
    fs: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ParameterError(f"Signal samples must be one-dimensional, got shape {samples.shape}")
        if not self.fs > 0:
            raise ParameterError(f"Sample rate must be positive, got {self.fs}")
        if not np.all(np.isfinite(samples)):
            raise ParameterError("Signal contains NaN or Inf values")
        object.__setattr__(self, 'samples', _as_readonly(samples))
        object.__setattr__(self, 'fs', float(self.fs))

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return len(self) / self.fs

    def slice(self, start: int, end: int) -> 'Signal':
        return Signal(self.samples[start:end], self.fs)

    def with_samples(self, samples: np.ndarray, fs: Optional[float] = None) -> 'Signal':
        return Signal(samples, self.fs if fs is None else fs)


@dataclass(frozen=True)
class MultiChannel:
    """C equally long channels, stored as a (T, C) array."""

    data: np.ndarray
    fs: float
    channel_labels: List[str] = field(default=None)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim == 1:
            data = data[:, None]
        if data.ndim != 2 or data.shape[1] < 1:
            raise ParameterError(f"Multi-channel data must have shape (T, C) with C >= 1, got {data.shape}")
        if not self.fs > 0:
            raise ParameterError(f"Sample rate must be positive, got {self.fs}")
        if not np.all(np.isfinite(data)):
            raise ParameterError("Multi-channel data contains NaN or Inf values")
        labels = self.channel_labels
        if labels is None:
            labels = [f"ch{c + 1}" for c in range(data.shape[1])]
        labels = [str(label) for label in labels]
        if len(labels) != data.shape[1]:
            raise ParameterError(f"Expected {data.shape[1]} channel labels, got {len(labels)}")
        object.__setattr__(self, 'data', _as_readonly(data))
        object.__setattr__(self, 'fs', float(self.fs))
        object.__setattr__(self, 'channel_labels', labels)

    def __len__(self) -> int:
        return self.data.shape[0]

    @property
    def n_channels(self) -> int:
        return self.data.shape[1]

    def channel(self, c: int) -> Signal:
        return Signal(self.data[:, c], self.fs)

    def slice(self, start: int, end: int) -> 'MultiChannel':
        return MultiChannel(self.data[start:end], self.fs, self.channel_labels)

    def select(self, indices: Sequence[int]) -> 'MultiChannel':
        indices = list(indices)
        return MultiChannel(self.data[:, indices], self.fs, [self.channel_labels[i] for i in indices])

    def with_data(self, data: np.ndarray, fs: Optional[float] = None) -> 'MultiChannel':
        return MultiChannel(data, self.fs if fs is None else fs, self.channel_labels)


@dataclass(frozen=True)
class Trial:
    """One labelled recording: EEG, one envelope per speaker and the attended speaker.

    `offset` is the sample index of this view inside the original recording, so
    windows cut from a trial keep a stable identity.
    """

    eeg: MultiChannel
    envelopes: List[Signal]
    attended: int
    subject_id: str
    trial_id: str = 'trial0'
    offset: int = 0
    normalization: Any = None

    def __post_init__(self):
        envelopes = list(self.envelopes)
        if len(envelopes) < 2:
            raise ParameterError(f"A trial needs at least two speaker envelopes, got {len(envelopes)}")
        for i, envelope in enumerate(envelopes):
            if envelope.fs != self.eeg.fs:
                raise ParameterError(f"Envelope {i} sampled at {envelope.fs} Hz, EEG at {self.eeg.fs} Hz")
            if len(envelope) != len(self.eeg):
                raise ParameterError(f"Envelope {i} has {len(envelope)} samples, EEG has {len(self.eeg)}")
        if not 0 <= int(self.attended) < len(envelopes):
            raise ParameterError(f"Attended index {self.attended} out of range for {len(envelopes)} speakers")
        object.__setattr__(self, 'envelopes', envelopes)
        object.__setattr__(self, 'attended', int(self.attended))
        object.__setattr__(self, 'subject_id', str(self.subject_id))
        object.__setattr__(self, 'trial_id', str(self.trial_id))

    def __len__(self) -> int:
        return len(self.eeg)

    @property
    def fs(self) -> float:
        return self.eeg.fs

    @property
    def n_speakers(self) -> int:
        return len(self.envelopes)

    @property
    def n_channels(self) -> int:
        return self.eeg.n_channels

    @property
    def duration(self) -> float:
        return len(self) / self.fs

    @property
    def key(self) -> tuple:
        return self.subject_id, self.trial_id, self.offset, self.offset + len(self)

    def envelope_matrix(self) -> np.ndarray:
        """ Envelopes stacked as a (n_speakers, T) array. """
        return np.stack([envelope.samples for envelope in self.envelopes])

    def slice(self, start: int, end: int) -> 'Trial':
        if not 0 <= start < end <= len(self):
            raise ParameterError(f"Invalid slice [{start}, {end}) for a trial of {len(self)} samples")
        return replace(
            self,
            eeg=self.eeg.slice(start, end),
            envelopes=[envelope.slice(start, end) for envelope in self.envelopes],
            offset=self.offset + start)

    def replace(self, **changes) -> 'Trial':
        return replace(self, **changes)
