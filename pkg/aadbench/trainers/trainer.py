import os
import time
import logging

from typing import Dict, List, Optional, Tuple

import numpy as np

from aadbench.configs.trainer import TrainerConfig
from aadbench.models.nn_sr import NnSrModel, nnsr_grad, nnsr_loss
from aadbench.utils.exceptions import DivergenceError, ParameterError

console = logging.getLogger(__name__)
MODEL_DIRNAME = 'ckpt'

Batch = Tuple[np.ndarray, np.ndarray]


class Trainer:
    """Trainer for the stimulus-reconstruction network.

    Plain mini-batch gradient descent on 1 - pearson over M-sample batches, with
    validation-based early stopping and the best model kept in memory.

    Adapted from: https://github.com/karpathy/nanoGPT/blob/master/train.py

    """
    def __init__(
            self,
            config: TrainerConfig,
            model: NnSrModel,
            out_dir: Optional[str] = None,
            seed: Optional[int] = 1337,
            train_batches: Optional[List[Batch]] = None,
            val_batches: Optional[List[Batch]] = None,
    ):

        # set args
        self.out_dir = out_dir
        self.seed = seed
        self.model = model
        self.train_batches = train_batches if train_batches is not None else []
        self.val_batches = val_batches if val_batches is not None else []
        self._loss_dict = {}

        # set config args
        self.learning_rate = config.learning_rate
        self.max_epochs = config.max_epochs
        self.shuffle = config.shuffle
        self.patience = config.patience
        self.divergence_threshold = config.divergence_threshold
        self.divergence_patience = config.divergence_patience
        self.eval_interval = config.eval_interval
        self.log_interval = config.log_interval
        self.save_checkpoint = config.save_checkpoint

        self._iter_num = 0
        self._epoch = 0
        self._best_val_loss = 1e9
        self._best_model = None
        self._epochs_since_best = 0
        self._diverged_epochs = 0
        self._rng = np.random.default_rng(seed)

    @property
    def loss_history(self) -> List[Dict[str, float]]:
        """ One row per evaluation: epoch, mean training loss and validation loss. """
        return [{'epoch': epoch, 'train_loss': losses['train'], 'val_loss': losses['val']}
                for epoch, losses in self._loss_dict.items()]

    def set_batches(self, train_batches: List[Batch], val_batches: Optional[List[Batch]] = None) -> None:
        self.train_batches = train_batches
        self.val_batches = val_batches if val_batches is not None else []

    def _save_ckpt(self):
        if self.out_dir is not None and self.save_checkpoint:
            self.model.save_pretrained(os.path.join(self.out_dir, MODEL_DIRNAME))

    def estimate_loss(self, batches: List[Batch]) -> float:
        if len(batches) == 0:
            return float('nan')
        return float(np.mean([nnsr_loss(self.model, X, s) for X, s in batches]))

    def _step(self, X: np.ndarray, s: np.ndarray) -> float:
        loss = nnsr_loss(self.model, X, s)
        grad, _ = nnsr_grad(self.model, X, s)
        self.model.W1 -= self.learning_rate * grad.W1
        self.model.b1 -= self.learning_rate * grad.b1
        self.model.w2 -= self.learning_rate * grad.w2
        self.model.b2 -= self.learning_rate * grad.b2
        return loss

    def evaluate(self, train_loss: float) -> None:
        if self._epoch % self.eval_interval != 0:
            return
        val_loss = self.estimate_loss(self.val_batches) if self.val_batches else train_loss
        self._loss_dict[self._epoch] = {'train': train_loss, 'val': val_loss}
        console.info(f"Evaluation at epoch {self._epoch}: train loss {train_loss:.4f}, val loss {val_loss:.4f}")
        if val_loss < self._best_val_loss:
            self._best_val_loss = val_loss
            self._best_model = self.model.copy()
            self._epochs_since_best = 0
            self._save_ckpt()
            console.debug(f"Checkpoint updated at epoch {self._epoch}")
        else:
            self._epochs_since_best += self.eval_interval

    def _check_divergence(self, train_loss: float) -> None:
        if train_loss > self.divergence_threshold:
            self._diverged_epochs += 1
        else:
            self._diverged_epochs = 0
        if self._diverged_epochs >= self.divergence_patience:
            history = {epoch: losses['train'] for epoch, losses in self._loss_dict.items()}
            raise DivergenceError(
                f"Training loss above {self.divergence_threshold} for {self._diverged_epochs} epochs "
                f"(epoch {self._epoch}, iteration {self._iter_num}, learning rate {self.learning_rate}); "
                f"loss history {history}")

    def _terminate(self) -> bool:
        return self._epoch >= self.max_epochs or self._epochs_since_best >= self.patience

    def train(self) -> NnSrModel:
        """ Runs until `max_epochs` or until the validation loss stops improving; returns the best model. """
        if len(self.train_batches) == 0:
            raise ParameterError("No training batches, the training data is shorter than one batch")

        self._best_model = self.model.copy()
        self._best_val_loss = self.estimate_loss(self.val_batches) if self.val_batches else 1e9
        t0 = time.time()
        while not self._terminate():
            order = self._rng.permutation(len(self.train_batches)) if self.shuffle \
                else np.arange(len(self.train_batches))
            losses = []
            for idx in order:
                X, s = self.train_batches[idx]
                losses.append(self._step(X, s))
                if self._iter_num % self.log_interval == 0:
                    console.debug(f"iter {self._iter_num}: loss {losses[-1]:.6f}")
                self._iter_num += 1
            self._epoch += 1
            train_loss = float(np.mean(losses))
            self.evaluate(train_loss)
            self._check_divergence(train_loss)

        console.info(f"Training finished after {self._epoch} epochs ({self._iter_num} iterations, "
                     f"{time.time() - t0:.1f}s), best val loss {self._best_val_loss:.4f}")
        self.model = self._best_model
        return self.model
