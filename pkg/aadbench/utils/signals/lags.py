""" Time-lagged design matrices.

Anti-causal designs feed backward models (EEG -> envelope): row t holds
x_c(t), ..., x_c(t+L-1) for every channel c. Causal designs feed forward
filters on the envelope: row t holds s(t), s(t-1), ..., s(t-L+1).

Columns are channel-major: all lags of channel 1, then all lags of channel 2, ...
Only rows whose lags stay inside the recording are kept, so row 0 of an
anti-causal design is time 0 and row 0 of a causal design is time L-1.
"""

from dataclasses import dataclass
from typing import List, Union

import numpy as np

from numpy.lib.stride_tricks import sliding_window_view

from aadbench.utils.exceptions import InsufficientDataError, ParameterError
from aadbench.utils.signals.base import Signal, MultiChannel

ANTI_CAUSAL = 'anti-causal'
CAUSAL = 'causal'
DIRECTIONS = (ANTI_CAUSAL, CAUSAL)


@dataclass(frozen=True)
class LaggedDesign:
    matrix: np.ndarray
    direction: str
    L: int
    n_channels: int
    first_index: int
    fs: float

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def time_indices(self) -> np.ndarray:
        return np.arange(self.first_index, self.first_index + self.rows)

    def align(self, target: Union[np.ndarray, Signal]) -> np.ndarray:
        """ The samples of `target` that line up with the rows of this design. """
        samples = target.samples if isinstance(target, Signal) else np.asarray(target)
        if samples.shape[0] < self.first_index + self.rows:
            raise ParameterError(
                f"Target of length {samples.shape[0]} is shorter than the design span "
                f"{self.first_index + self.rows}")
        return samples[self.first_index:self.first_index + self.rows]

    def restrict(self, start: int, stop: int) -> 'LaggedDesign':
        """ Keeps rows whose time index lies in [start, stop). """
        lo = max(start, self.first_index) - self.first_index
        hi = min(stop, self.first_index + self.rows) - self.first_index
        if hi <= lo:
            raise InsufficientDataError(f"No rows of the design fall inside [{start}, {stop})")
        return LaggedDesign(self.matrix[lo:hi], self.direction, self.L, self.n_channels, self.first_index + lo, self.fs)


def build_lagged(x: Union[MultiChannel, Signal], L: int, direction: str = ANTI_CAUSAL) -> LaggedDesign:
    """ Builds the lagged design of `x` with `L` lags per channel.

    Raises:
        InsufficientDataError: if L exceeds the number of samples.
    """
    if direction not in DIRECTIONS:
        raise ParameterError(f"Direction {direction} not available, choose from {DIRECTIONS}")
    if int(L) != L or L < 1:
        raise ParameterError(f"Number of lags must be a positive integer, got {L}")
    L = int(L)
    data = x.samples[:, None] if isinstance(x, Signal) else x.data
    T, C = data.shape
    if L > T:
        raise InsufficientDataError(f"Cannot build {L} lags from {T} samples")

    windows = sliding_window_view(data, L, axis=0)  # (T - L + 1, C, L), windows[t, c, l] = x_c(t + l)
    if direction == CAUSAL:
        windows = windows[:, :, ::-1]
        first_index = L - 1
    else:
        first_index = 0
    matrix = np.ascontiguousarray(windows.reshape(T - L + 1, C * L))
    return LaggedDesign(matrix, direction, L, C, first_index, x.fs)


def intersect_designs(*designs: LaggedDesign) -> List[LaggedDesign]:
    """ Restricts designs to the time indices they all cover. """
    start = max(design.first_index for design in designs)
    stop = min(design.first_index + design.rows for design in designs)
    return [design.restrict(start, stop) for design in designs]
