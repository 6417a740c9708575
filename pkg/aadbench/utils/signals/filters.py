""" Resampling and zero-phase band filtering for Signal and MultiChannel data.

Sources:
    [1] https://github.com/YYao-42/Identifying-Temporal-Correlations-Between-Natural-Single-shot-Videos-and-EEG-Signals
        (Butterworth SOS band filtering followed by polyphase resampling)
"""

from fractions import Fraction
from typing import Union

import numpy as np

from scipy import fft, signal

from aadbench.utils.exceptions import ParameterError, UnsupportedRateError
from aadbench.utils.signals.base import Signal, MultiChannel

SignalLike = Union[Signal, MultiChannel]

MAX_RESAMPLE_FACTOR = 1024
BUTTERWORTH_ORDER = 4
FILTER_METHODS = ('fft', 'butter')


def _samples(sig: SignalLike) -> np.ndarray:
    return sig.samples if isinstance(sig, Signal) else sig.data


def _rebuild(sig: SignalLike, samples: np.ndarray, fs: float = None) -> SignalLike:
    if isinstance(sig, Signal):
        return sig.with_samples(samples, fs)
    return sig.with_data(samples, fs)


def rate_ratio(fs_in: float, fs_out: float) -> Fraction:
    """ Returns the reduced up/down ratio fs_out / fs_in, or raises if it is not supported. """
    if not fs_out > 0:
        raise UnsupportedRateError(f"Target sample rate must be positive, got {fs_out}")
    if fs_out > fs_in:
        raise UnsupportedRateError(f"Only downsampling is supported ({fs_in} Hz -> {fs_out} Hz)")
    ratio = Fraction(fs_out) / Fraction(fs_in)
    if ratio.numerator > MAX_RESAMPLE_FACTOR or ratio.denominator > MAX_RESAMPLE_FACTOR:
        raise UnsupportedRateError(
            f"Rate ratio {fs_out}/{fs_in} reduces to {ratio.numerator}/{ratio.denominator}, "
            f"factors above {MAX_RESAMPLE_FACTOR} are not supported")
    return ratio


def resample(sig: SignalLike, fs_out: float) -> SignalLike:
    """ Downsamples with a polyphase anti-aliasing FIR filter (Kaiser window).

    Equal rates return an unchanged copy. The signal is extended linearly at both
    ends before filtering, so constants and slow trends survive without edge dips.
    """
    ratio = rate_ratio(sig.fs, fs_out)
    if ratio == 1:
        return _rebuild(sig, _samples(sig))
    out = signal.resample_poly(
        _samples(sig), ratio.numerator, ratio.denominator, axis=0, padtype='line')
    return _rebuild(sig, out, float(fs_out))


def intermediate_rate(fs_in: float, fs_out: float) -> float:
    """ Highest multiple of `fs_out` below `fs_in` reachable from both ends with supported ratios. """
    for k in range(int(fs_in // fs_out), 1, -1):
        fs_mid = fs_out * k
        if fs_mid >= fs_in:
            continue
        try:
            rate_ratio(fs_in, fs_mid)
            rate_ratio(fs_mid, fs_out)
        except UnsupportedRateError:
            continue
        return float(fs_mid)
    raise UnsupportedRateError(f"No two-stage resampling path from {fs_in} Hz to {fs_out} Hz")


def resample_staged(sig: SignalLike, fs_out: float) -> SignalLike:
    """ Like `resample`, but falls back to two polyphase stages when the direct ratio is too large.

    Audio rates such as 44.1 kHz reduce to ratios like 16/11025 against 64 Hz.
    """
    try:
        rate_ratio(sig.fs, fs_out)
    except UnsupportedRateError:
        if not 0 < fs_out < sig.fs:
            raise
        return resample(resample(sig, intermediate_rate(sig.fs, fs_out)), fs_out)
    return resample(sig, fs_out)


def _check_band(fs: float, f_lo: float, f_hi: float = None) -> None:
    nyquist = fs / 2
    if not 0 < f_lo < nyquist:
        raise ParameterError(f"Lower band edge {f_lo} Hz must lie in (0, {nyquist}) Hz")
    if f_hi is not None and not f_lo < f_hi < nyquist:
        raise ParameterError(f"Upper band edge {f_hi} Hz must lie in ({f_lo}, {nyquist}) Hz")


def _fft_mask(x: np.ndarray, fs: float, f_lo: float, f_hi: float = None) -> np.ndarray:
    n = x.shape[0]
    freqs = fft.rfftfreq(n, d=1.0 / fs)
    keep = freqs >= f_lo
    if f_hi is not None:
        keep &= freqs <= f_hi
    spectrum = fft.rfft(x, axis=0)
    spectrum[~keep] = 0
    return fft.irfft(spectrum, n=n, axis=0)


def _butter(x: np.ndarray, fs: float, f_lo: float, f_hi: float = None) -> np.ndarray:
    if f_hi is None:
        sos = signal.butter(BUTTERWORTH_ORDER, f_lo, btype='highpass', output='sos', fs=fs)
    else:
        sos = signal.butter(BUTTERWORTH_ORDER, [f_lo, f_hi], btype='bandpass', output='sos', fs=fs)
    return signal.sosfiltfilt(sos, x, axis=0)


def _filter(sig: SignalLike, f_lo: float, f_hi: float, method: str) -> SignalLike:
    if method not in FILTER_METHODS:
        raise ParameterError(f"Filter method {method} not available, choose from {FILTER_METHODS}")
    x = _samples(sig)
    if method == 'fft':
        out = _fft_mask(x, sig.fs, f_lo, f_hi)
    else:
        out = _butter(x, sig.fs, f_lo, f_hi)
    return _rebuild(sig, out)


def bandpass(sig: SignalLike, f_lo: float, f_hi: float, method: str = 'fft') -> SignalLike:
    """ Zero-phase bandpass filter between `f_lo` and `f_hi` Hz.

    Args:
        sig: signal or multi-channel recording, filtered along time.
        f_lo: lower band edge, 0 < f_lo < f_hi.
        f_hi: upper band edge, below Nyquist.
        method: 'fft' applies an ideal spectral mask (an exact projection, so filtering
            twice equals filtering once); 'butter' applies a Butterworth filter forward
            and backward.
    """
    _check_band(sig.fs, f_lo, f_hi)
    return _filter(sig, f_lo, f_hi, method)


def highpass(sig: SignalLike, f_lo: float, method: str = 'fft') -> SignalLike:
    """ Zero-phase highpass filter, used when the upper band edge coincides with Nyquist. """
    _check_band(sig.fs, f_lo)
    return _filter(sig, f_lo, None, method)
