import abc
import hashlib

from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from aadbench.configs.preprocessing import PreprocessingConfig, LINEAR_PREPROCESSING
from aadbench.utils.exceptions import ParameterError
from aadbench.utils.signals.base import Trial

# how the harness selects a decoder's hyperparameter
TUNING_POLICIES = ('global', 'per_tau', 'training_accuracy', 'none')


@dataclass(frozen=True)
class Decision:
    """ Outcome of one attention decision.

    `degenerate` is set when no score carries evidence (e.g. every correlation
    is undefined); `tie` when several speakers share the best score. The lowest
    tied index is chosen in both cases.
    """

    speaker: int
    scores: List[float] = field(default_factory=list)
    degenerate: bool = False
    tie: bool = False


def argmax_decision(scores: Sequence[float], degenerate: bool = False) -> Decision:
    scores = [float(score) for score in scores]
    best = max(scores)
    winners = [i for i, score in enumerate(scores) if score == best]
    return Decision(speaker=winners[0], scores=scores, degenerate=degenerate, tie=len(winners) > 1)


class BaseDecoder(abc.ABC):
    """ Common interface of all attention decoders.

    A decoder is fitted on a list of training segments (normalised Trial views)
    and decides one held-out window at a time. Decoders may cache per-segment
    statistics between fits, so one instance serves one normalisation (one outer fold).
    """

    tuning: str = 'none'
    preprocessing: PreprocessingConfig = LINEAR_PREPROCESSING

    @abc.abstractmethod
    def fit(self, segments: Sequence[Trial], window_length: Optional[int] = None) -> 'BaseDecoder':
        pass

    @abc.abstractmethod
    def decide(self, window: Trial) -> Decision:
        pass

    def hyperparameter_grid(self) -> List[Any]:
        return []

    def set_hyperparameter(self, value: Any) -> None:
        pass

    @property
    def hyperparameter(self) -> Any:
        return None

    def reset(self) -> None:
        """ Drops cached statistics. """

    @classmethod
    @abc.abstractmethod
    def from_config(cls, config):
        pass

    @staticmethod
    def seconds_to_lags(seconds: float, fs: float) -> int:
        return max(1, int(round(seconds * fs)))

    def decide_segment(self, segment: Trial, window_length: int) -> List[Decision]:
        """ One decision per disjoint window of `window_length` samples in `segment`. """
        return [self.decide(window) for window in self.split_windows(segment, window_length)]

    @staticmethod
    def window_bounds(num_samples: int, window_length: Optional[int]) -> List[Tuple[int, int]]:
        """ [start, end) of the disjoint windows tiling `num_samples`; the remainder is dropped. """
        if window_length is None:
            return [(0, num_samples)]
        if window_length < 1:
            raise ParameterError(f"Window length must be positive, got {window_length}")
        return [(k * window_length, (k + 1) * window_length) for k in range(num_samples // window_length)]

    @classmethod
    def split_windows(cls, segment: Trial, window_length: Optional[int]) -> List[Trial]:
        return [segment.slice(start, end) for start, end in cls.window_bounds(len(segment), window_length)]

    @staticmethod
    def window_rows(first_index: int, rows: int, start: int, end: int) -> Tuple[int, int]:
        """ Rows of a design (row 0 at time `first_index`) whose time lies in [start, end). """
        lo = min(max(start - first_index, 0), rows)
        hi = min(max(end - first_index, 0), rows)
        return lo, hi


def weights_digest(weights: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(weights, dtype=np.float64).tobytes()).hexdigest()
