from aadbench.configs.base import Config


class PreprocessingConfig(Config):

    def __init__(
        self,
        fs: float,
        f_lo: float,
        f_hi: float,
        filter_method: str = 'fft',
        normalize: bool = True,
    ):
        super().__init__()
        self.fs = fs
        self.f_lo = f_lo
        self.f_hi = f_hi
        self.filter_method = filter_method
        self.normalize = normalize
        self._post_init()

    def _post_init(self):
        self._require(self.fs > 0, 'fs', f"sample rate must be positive, got {self.fs}")
        self._require(0 < self.f_lo < self.f_hi, 'f_lo', f"band [{self.f_lo}, {self.f_hi}] Hz is empty")
        self._require(self.f_lo < self.fs / 2, 'f_lo', f"lower edge must lie below Nyquist ({self.fs / 2} Hz)")
        self._require(self.filter_method in ('fft', 'butter'), 'filter_method',
                      f"unknown method {self.filter_method}")


LINEAR_PREPROCESSING = PreprocessingConfig(fs=20.0, f_lo=1.0, f_hi=9.0)
NN_PREPROCESSING = PreprocessingConfig(fs=64.0, f_lo=1.0, f_hi=32.0)
