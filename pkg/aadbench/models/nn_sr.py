""" Stimulus-reconstruction network: one tanh hidden layer of two units and a linear output.

The network maps the L x C anti-causal lag vector of the EEG at time t to one sample of
the attended envelope and is trained on 1 - pearson(output, envelope) over M-sample
windows. Gradients are derived by hand through the correlation and both layers.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.configs.preprocessing import PreprocessingConfig, NN_PREPROCESSING
from aadbench.configs.trainer import TrainerConfig
from aadbench.models.base import BaseDecoder, Decision
from aadbench.models.mmse import decide, window_design
from aadbench.utils.data import read_blocks, write_blocks
from aadbench.utils.exceptions import ParameterError, UndefinedTargetError
from aadbench.utils.signals.base import Signal, Trial
from aadbench.utils.signals.correlation import ZERO_VARIANCE_TOL

HIDDEN_UNITS = 2
NN_SR_DESCRIPTOR = 'nn_sr.json'


@dataclass
class NnSrModel:
    W1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: float
    L: int = 1
    n_channels: Optional[int] = None

    def __post_init__(self):
        self.W1 = np.asarray(self.W1, dtype=np.float64)
        self.b1 = np.asarray(self.b1, dtype=np.float64).ravel()
        self.w2 = np.asarray(self.w2, dtype=np.float64).ravel()
        self.b2 = float(self.b2)
        if self.W1.ndim != 2 or self.W1.shape[0] != HIDDEN_UNITS:
            raise ParameterError(f"Hidden weights must have shape ({HIDDEN_UNITS}, D), got {self.W1.shape}")
        if self.b1.shape[0] != HIDDEN_UNITS or self.w2.shape[0] != HIDDEN_UNITS:
            raise ParameterError(f"Hidden bias and output weights must have {HIDDEN_UNITS} entries")
        if self.n_channels is None:
            self.n_channels = self.dim // self.L

    @property
    def dim(self) -> int:
        return self.W1.shape[1]

    @property
    def num_params(self) -> int:
        return HIDDEN_UNITS * (self.dim + 1) + HIDDEN_UNITS + 1

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.W1.ravel(), self.b1, self.w2, [self.b2]])

    @classmethod
    def from_vector(cls, vector: np.ndarray, dim: int, L: int = 1, n_channels: Optional[int] = None) -> 'NnSrModel':
        vector = np.asarray(vector, dtype=np.float64)
        expected = HIDDEN_UNITS * (dim + 1) + HIDDEN_UNITS + 1
        if vector.shape != (expected,):
            raise ParameterError(f"Expected {expected} parameters for dimension {dim}, got {vector.shape[0]}")
        n_hidden = HIDDEN_UNITS * dim
        return cls(vector[:n_hidden].reshape(HIDDEN_UNITS, dim), vector[n_hidden:n_hidden + HIDDEN_UNITS],
                   vector[n_hidden + HIDDEN_UNITS:n_hidden + 2 * HIDDEN_UNITS], vector[-1], L, n_channels)

    def copy(self) -> 'NnSrModel':
        return NnSrModel(self.W1.copy(), self.b1.copy(), self.w2.copy(), self.b2, self.L, self.n_channels)

    @classmethod
    def init(cls, L: int, n_channels: int, seed: int = 1337) -> 'NnSrModel':
        """ Hidden weights and biases uniform in +-1/sqrt(L C), output weights in +-1/sqrt(2), zero output bias. """
        rng = np.random.default_rng(seed)
        dim = L * n_channels
        a = 1.0 / np.sqrt(dim)
        a2 = 1.0 / np.sqrt(HIDDEN_UNITS)
        return cls(rng.uniform(-a, a, size=(HIDDEN_UNITS, dim)), rng.uniform(-a, a, size=HIDDEN_UNITS),
                   rng.uniform(-a2, a2, size=HIDDEN_UNITS), 0.0, L, n_channels)

    def save_pretrained(self, save_directory: str) -> None:
        write_blocks(save_directory, NN_SR_DESCRIPTOR,
                     {'L': self.L, 'n_channels': self.n_channels, 'b2': self.b2, 'num_params': self.num_params},
                     {'W1': self.W1, 'b1': self.b1, 'w2': self.w2})

    @classmethod
    def load_pretrained(cls, save_directory: str) -> 'NnSrModel':
        descriptor, blocks = read_blocks(save_directory, NN_SR_DESCRIPTOR)
        return cls(blocks['W1'], blocks['b1'][:, 0], blocks['w2'][:, 0], descriptor['b2'],
                   descriptor['L'], descriptor['n_channels'])


def _hidden(model: NnSrModel, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.dim:
        raise ParameterError(f"Input has dimension {X.shape[1]}, the network expects {model.dim}")
    return np.tanh(X @ model.W1.T + model.b1)


def nnsr_forward(model: NnSrModel, X: np.ndarray) -> np.ndarray:
    """ w2 . tanh(W1 x + b1) + b2 for one lag vector (returns a scalar) or for every row of X. """
    out = _hidden(model, X) @ model.w2 + model.b2
    return float(out[0]) if np.ndim(X) == 1 else out


def _centered(y: np.ndarray, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float, float]:
    if s.shape[0] < 2:
        raise ParameterError(f"The loss needs at least two samples, got {s.shape[0]}")
    if s.shape[0] != y.shape[0]:
        raise ParameterError(f"Got {y.shape[0]} inputs and {s.shape[0]} targets")
    sc = s - s.mean()
    yc = y - y.mean()
    s_norm = float(np.linalg.norm(sc))
    if s_norm <= ZERO_VARIANCE_TOL * max(1.0, float(np.max(np.abs(s)))) * np.sqrt(s.shape[0]):
        raise UndefinedTargetError("Target envelope is constant, the correlation loss is undefined")
    y_norm = float(np.linalg.norm(yc))
    if y_norm <= ZERO_VARIANCE_TOL * max(1.0, float(np.max(np.abs(y)))) * np.sqrt(y.shape[0]):
        y_norm = 0.0
    return yc, sc, y_norm, s_norm


def nnsr_loss(model: NnSrModel, X: np.ndarray, s: np.ndarray, return_degenerate: bool = False):
    """ 1 - pearson(network output, s); a constant output gives 1 and sets the degenerate flag.

    Raises:
        UndefinedTargetError: if `s` is constant.
    """
    s = np.asarray(s, dtype=np.float64).ravel()
    yc, sc, y_norm, s_norm = _centered(np.atleast_1d(nnsr_forward(model, X)), s)
    degenerate = y_norm == 0.0
    rho = 0.0 if degenerate else float(yc @ sc) / (y_norm * s_norm)
    loss = 1.0 - rho
    return (loss, degenerate) if return_degenerate else loss


def nnsr_grad(model: NnSrModel, X: np.ndarray, s: np.ndarray) -> Tuple[NnSrModel, bool]:
    """ Analytic gradient of `nnsr_loss` with respect to every parameter.

    With yc and sc the centred output and target and rho their correlation,
        d loss / d y = -(sc / (|yc| |sc|) - rho * yc / |yc|^2),
    which sums to zero, so the output bias never moves. A constant output returns a
    zero gradient and the degenerate flag.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    s = np.asarray(s, dtype=np.float64).ravel()
    h = _hidden(model, X)
    y = h @ model.w2 + model.b2
    yc, sc, y_norm, s_norm = _centered(y, s)
    if y_norm == 0.0:
        zero = NnSrModel(np.zeros_like(model.W1), np.zeros(HIDDEN_UNITS), np.zeros(HIDDEN_UNITS), 0.0,
                         model.L, model.n_channels)
        return zero, True

    rho = float(yc @ sc) / (y_norm * s_norm)
    g_y = -(sc / (y_norm * s_norm) - rho * yc / y_norm ** 2)
    g_a = np.outer(g_y, model.w2) * (1.0 - h ** 2)
    grad = NnSrModel(g_a.T @ X, g_a.sum(axis=0), h.T @ g_y, float(g_y.sum()), model.L, model.n_channels)
    return grad, False


def make_batches(trials: Sequence[Trial], L: int, batch_length: int,
                 validation_fraction: float = 0.0) -> Tuple[List[Tuple[np.ndarray, np.ndarray]], List[Tuple[np.ndarray, np.ndarray]]]:
    """ Cuts every trial's design into contiguous M-row batches.

    The last `validation_fraction` of each trial's batches is held out for validation.
    Batches with a constant target are skipped.
    """
    train, val = [], []
    for trial in trials:
        design, envelopes = window_design(trial, L)
        target = envelopes[trial.attended].samples
        batches = []
        for start in range(0, design.rows - batch_length + 1, batch_length):
            s = target[start:start + batch_length]
            if np.ptp(s) > 0:
                batches.append((design.matrix[start:start + batch_length], s))
        n_val = int(round(validation_fraction * len(batches)))
        if validation_fraction > 0 and n_val == 0 and len(batches) > 1:
            n_val = 1
        train.extend(batches[:len(batches) - n_val])
        val.extend(batches[len(batches) - n_val:])
    return train, val


def reconstruct(model: NnSrModel, trial: Trial) -> Tuple[Signal, List[Signal], int]:
    """ Network output over a whole trial, the aligned envelopes and the time of row 0. """
    design, envelopes = window_design(trial, model.L)
    return Signal(nnsr_forward(model, design.matrix), trial.fs), envelopes, design.first_index


class NnSrDecoder(BaseDecoder):

    def __init__(
            self,
            lags: float = 0.42,
            trainer_config: Optional[TrainerConfig] = None,
            seed: int = 1337,
            preprocessing: PreprocessingConfig = NN_PREPROCESSING,
            out_dir: Optional[str] = None,
    ):
        self.preprocessing = preprocessing
        self.L = self.seconds_to_lags(lags, preprocessing.fs)
        self.trainer_config = trainer_config if trainer_config is not None else TrainerConfig()
        self.seed = seed
        self.out_dir = out_dir
        self.model: Optional[NnSrModel] = None
        self.diagnostics: List[Dict[str, Any]] = []

    @property
    def tuning(self) -> str:
        # without a fixed batch duration the loss window follows the decision window
        return 'none' if self.trainer_config.batch_seconds is not None else 'per_tau'

    def fit(self, segments: Sequence[Trial], window_length: Optional[int] = None) -> 'NnSrDecoder':
        # imported here, the trainer depends on this module
        from aadbench.trainers.trainer import Trainer

        if len(segments) == 0:
            raise ParameterError("At least one training segment is required")
        model = NnSrModel.init(self.L, segments[0].n_channels, self.seed)
        trainer = Trainer(config=self.trainer_config, model=model, out_dir=self.out_dir, seed=self.seed)
        batch_length = self.trainer_config.batch_length(segments[0].fs, window_length)
        trainer.set_batches(*make_batches(segments, self.L, batch_length, self.trainer_config.validation_fraction))
        self.model = trainer.train()
        self.diagnostics.extend(dict(row, batch_length=batch_length) for row in trainer.loss_history)
        return self

    def decide(self, window: Trial) -> Decision:
        if self.model is None:
            raise ParameterError("Decoder is not fitted")
        s_hat, envelopes, _ = reconstruct(self.model, window)
        return decide(s_hat, envelopes)

    def decide_segment(self, segment: Trial, window_length: int) -> List[Decision]:
        if self.model is None:
            raise ParameterError("Decoder is not fitted")
        s_hat, envelopes, first_index = reconstruct(self.model, segment)
        decisions = []
        for start, end in self.window_bounds(len(segment), window_length):
            decisions.append(decide(s_hat, envelopes, self.window_rows(first_index, len(s_hat), start, end)))
        return decisions

    @classmethod
    def from_config(cls, config: AlgorithmConfig) -> 'NnSrDecoder':
        return cls(
            lags=config.lags,
            trainer_config=config.trainer,
            seed=config.seed,
            preprocessing=config.preprocessing if config.preprocessing is not None else NN_PREPROCESSING)
