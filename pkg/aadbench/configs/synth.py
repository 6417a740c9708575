from typing import List, Optional

from aadbench.configs.base import Config

NOISE_MODELS = ('white', 'pink')


class SynthConfig(Config):

    def __init__(
        self,
        n_channels: int = 16,
        duration: float = 600.0,
        fs: float = 64.0,
        n_speakers: int = 2,
        unattended_gain: float = 0.7,
        noise_level: float = 1.0,
        envelope_cutoff: float = 8.0,
        trf_length: float = 0.25,
        noise: str = 'white',
        shared_trf: bool = False,
        n_subjects: int = 16,
        trials_per_subject: int = 1,
        trf_jitter: float = 0.1,
        attended_trf: Optional[List[List[float]]] = None,
        unattended_trf: Optional[List[List[float]]] = None,
        seed: int = 0,
    ):
        super().__init__()
        # recording
        self.n_channels = n_channels
        self.duration = duration
        self.fs = fs
        self.n_speakers = n_speakers

        # forward model
        self.unattended_gain = unattended_gain
        self.noise_level = noise_level
        self.envelope_cutoff = envelope_cutoff
        self.trf_length = trf_length
        self.noise = noise
        self.shared_trf = shared_trf
        self.attended_trf = attended_trf
        self.unattended_trf = unattended_trf

        # population
        self.n_subjects = n_subjects
        self.trials_per_subject = trials_per_subject
        self.trf_jitter = trf_jitter
        self.seed = seed
        self._post_init()

    def _post_init(self):
        self._require(int(self.n_channels) == self.n_channels and self.n_channels >= 1, 'n_channels',
                      f"must be a positive integer, got {self.n_channels}")
        self._require(self.duration > 0, 'duration', f"must be positive, got {self.duration}")
        self._require(self.fs > 0, 'fs', f"must be positive, got {self.fs}")
        self._require(int(self.n_speakers) == self.n_speakers and self.n_speakers >= 2, 'n_speakers',
                      f"at least two speakers are needed, got {self.n_speakers}")
        self._require(0 <= self.unattended_gain <= 1, 'unattended_gain', f"must lie in [0, 1], got {self.unattended_gain}")
        self._require(self.noise_level >= 0, 'noise_level', f"must be non-negative, got {self.noise_level}")
        self._require(0 < self.envelope_cutoff < self.fs / 2, 'envelope_cutoff',
                      f"must lie in (0, {self.fs / 2}) Hz, got {self.envelope_cutoff}")
        self._require(self.trf_length > 0, 'trf_length', f"must be positive, got {self.trf_length}")
        self._require(self.noise in NOISE_MODELS, 'noise', f"choose from {NOISE_MODELS}, got {self.noise}")
        self._require(int(self.n_subjects) == self.n_subjects and self.n_subjects >= 1, 'n_subjects',
                      f"must be a positive integer, got {self.n_subjects}")
        self._require(int(self.trials_per_subject) == self.trials_per_subject and self.trials_per_subject >= 1,
                      'trials_per_subject', f"must be a positive integer, got {self.trials_per_subject}")
        self._require(self.trf_jitter >= 0, 'trf_jitter', f"must be non-negative, got {self.trf_jitter}")
        for name in ('attended_trf', 'unattended_trf'):
            kernel = getattr(self, name)
            if kernel is not None:
                self._require(len(kernel) == self.n_channels, name,
                              f"needs one kernel per channel ({self.n_channels}), got {len(kernel)}")
                self._require(len(set(len(row) for row in kernel)) == 1 and len(kernel[0]) >= 1, name,
                              "all channel kernels must share one non-zero length")

    @property
    def num_samples(self) -> int:
        return int(round(self.duration * self.fs))
