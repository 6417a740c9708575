""" Auditory-inspired speech envelope extraction.

The audio is split by a gammatone filterbank, each subband magnitude is
compressed with a powerlaw and the subbands are summed into one broadband envelope.

Sources:
    [1] https://github.com/exporl/auditory-eeg-challenge-2024-code (envelope.py)
"""

import numpy as np

from scipy import signal

from aadbench.utils.exceptions import ParameterError
from aadbench.utils.signals.base import Signal

DEFAULT_NUM_BANDS = 28
DEFAULT_F_LO = 50.0
DEFAULT_F_HI = 5000.0
DEFAULT_POWER = 0.6

# Glasberg & Moore ERB-rate scale
ERB_A = 21.4
ERB_B = 0.00437


def hz_to_erb_rate(f):
    return ERB_A * np.log10(1.0 + ERB_B * np.asarray(f, dtype=np.float64))


def erb_rate_to_hz(e):
    return (10.0 ** (np.asarray(e, dtype=np.float64) / ERB_A) - 1.0) / ERB_B


def erb_space(f_lo: float = DEFAULT_F_LO, f_hi: float = DEFAULT_F_HI, num_bands: int = DEFAULT_NUM_BANDS) -> np.ndarray:
    """ Centre frequencies equally spaced on the ERB-rate scale, ascending, endpoints included. """
    if num_bands < 1:
        raise ParameterError(f"Number of bands must be positive, got {num_bands}")
    if not 0 < f_lo <= f_hi:
        raise ParameterError(f"Invalid filterbank range [{f_lo}, {f_hi}] Hz")
    if num_bands == 1:
        return np.array([f_lo], dtype=np.float64)
    return erb_rate_to_hz(np.linspace(hz_to_erb_rate(f_lo), hz_to_erb_rate(f_hi), num_bands))


def gammatone_envelope(
        audio: Signal,
        num_bands: int = DEFAULT_NUM_BANDS,
        f_lo: float = DEFAULT_F_LO,
        f_hi: float = DEFAULT_F_HI,
        power: float = DEFAULT_POWER
) -> Signal:
    """ Broadband powerlaw-compressed envelope of an audio signal.

    The envelope keeps the audio sample rate; downsampling is a separate step.
    Since the filterbank is linear and the compression is |.|^power, scaling the
    audio by a > 0 scales the envelope by a^power exactly.
    """
    if f_hi >= audio.fs / 2:
        raise ParameterError(
            f"Audio sampled at {audio.fs} Hz cannot cover a filterbank reaching {f_hi} Hz")
    envelope = np.zeros(len(audio), dtype=np.float64)
    for center_frequency in erb_space(f_lo, f_hi, num_bands):
        b, a = signal.gammatone(center_frequency, 'iir', fs=audio.fs)
        subband = signal.lfilter(b, a, audio.samples)
        envelope += np.power(np.abs(subband), power)
    return Signal(envelope, audio.fs)
