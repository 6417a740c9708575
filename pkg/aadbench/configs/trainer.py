from typing import Optional

from aadbench.configs.base import Config

# loss window used when neither `batch_seconds` nor a decision window is known
FALLBACK_BATCH_SECONDS = 10.0


class TrainerConfig(Config):
    """ Mini-batch gradient descent settings of the stimulus-reconstruction network. """

    def __init__(
        self,
        learning_rate: float = 1e-3,
        max_epochs: int = 100,
        batch_seconds: Optional[float] = None,
        validation_fraction: float = 0.2,
        patience: int = 10,
        eval_interval: int = 1,
        log_interval: int = 10,
        divergence_threshold: float = 1.999,
        divergence_patience: int = 3,
        shuffle: bool = True,
        save_checkpoint: bool = False,
    ):
        super().__init__()

        # optimization
        self.learning_rate = learning_rate
        self.max_epochs = max_epochs
        self.batch_seconds = batch_seconds
        self.shuffle = shuffle

        # early stopping
        self.validation_fraction = validation_fraction
        self.patience = patience
        self.divergence_threshold = divergence_threshold
        self.divergence_patience = divergence_patience

        # evaluation & logging
        self.eval_interval = eval_interval
        self.log_interval = log_interval
        self.save_checkpoint = save_checkpoint
        self._post_init()

    def _post_init(self):
        self._require(self.learning_rate >= 0, 'learning_rate', f"must be non-negative, got {self.learning_rate}")
        self._require(self.max_epochs >= 1, 'max_epochs', f"must be at least 1, got {self.max_epochs}")
        self._require(self.batch_seconds is None or self.batch_seconds > 0, 'batch_seconds',
                      f"must be positive or null, got {self.batch_seconds}")
        self._require(0 <= self.validation_fraction < 1, 'validation_fraction',
                      f"must lie in [0, 1), got {self.validation_fraction}")
        self._require(self.patience >= 1, 'patience', f"must be at least 1, got {self.patience}")
        self._require(self.eval_interval >= 1, 'eval_interval', f"must be at least 1, got {self.eval_interval}")
        self._require(self.divergence_patience >= 1, 'divergence_patience',
                      f"must be at least 1, got {self.divergence_patience}")

    def batch_length(self, fs: float, window_length: Optional[int] = None) -> int:
        """ Samples per loss window; at least two so the correlation is defined.

        With `batch_seconds` unset a batch is one decision window of `window_length` samples.
        """
        if self.batch_seconds is not None:
            return max(2, int(round(self.batch_seconds * fs)))
        if window_length is not None:
            return max(2, int(window_length))
        return max(2, int(round(FALLBACK_BATCH_SECONDS * fs)))
