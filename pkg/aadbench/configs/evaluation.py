from typing import Any, Dict, List, Optional, Union

from aadbench.configs.base import Config
from aadbench.utils.metrics.mesd import MesdOptions

DEFAULT_TAUS = [1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 60.0]


class EvaluationConfig(Config):
    """ Two-stage cross-validation protocol and MESD settings. """

    def __init__(
        self,
        taus: Optional[List[float]] = None,
        segment_length: float = 60.0,
        inner_folds: int = 10,
        mesd: Optional[Union[Dict[str, Any], MesdOptions]] = None,
        chance_alpha: float = 0.05,
        write_diagnostics: bool = True,
    ):
        super().__init__()
        self.taus = [float(tau) for tau in taus] if taus is not None else list(DEFAULT_TAUS)
        self.segment_length = segment_length
        self.inner_folds = inner_folds
        self.mesd = MesdOptions.from_dict(mesd) if isinstance(mesd, dict) else (mesd or MesdOptions())
        self.chance_alpha = chance_alpha
        self.write_diagnostics = write_diagnostics
        self._post_init()

    def _post_init(self):
        self._require(len(self.taus) > 0, 'taus', "at least one decision window length is required")
        self._require(all(tau > 0 for tau in self.taus), 'taus', f"must be positive, got {self.taus}")
        self._require(all(b > a for a, b in zip(self.taus, self.taus[1:])), 'taus',
                      f"must be strictly increasing, got {self.taus}")
        self._require(self.segment_length > 0, 'segment_length', f"must be positive, got {self.segment_length}")
        self._require(max(self.taus) <= self.segment_length, 'taus',
                      f"the longest window ({max(self.taus)} s) exceeds the segment length ({self.segment_length} s)")
        self._require(self.inner_folds >= 2, 'inner_folds', f"must be at least 2, got {self.inner_folds}")
        self._require(0 < self.chance_alpha < 1, 'chance_alpha', f"must lie in (0, 1), got {self.chance_alpha}")
