""" Canonical correlation analysis between a backward EEG filter and a forward envelope filter.

The EEG is optionally reduced by PCA, expanded with L anti-causal lags and paired with
L_a causal lags of the envelope. The J canonical correlations of a window with each
speaker give the feature f = rho_1 - rho_2, classified by an LDA.

Sources:
    [1] https://github.com/osdf/utils (cca.py), CCA by SVD of the whitened cross-covariance
"""

import logging
import warnings

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from scipy import linalg

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.configs.preprocessing import PreprocessingConfig, LINEAR_PREPROCESSING
from aadbench.models.base import BaseDecoder, Decision, argmax_decision
from aadbench.models.lda import LdaClassifier, fit_lda
from aadbench.utils.data import read_blocks, write_blocks
from aadbench.utils.evaluators.folds import inner_cv
from aadbench.utils.exceptions import IllConditionedError, InsufficientDataError, ParameterError
from aadbench.utils.signals.base import MultiChannel, Signal, Trial
from aadbench.utils.signals.correlation import pearson_columns
from aadbench.utils.signals.lags import ANTI_CAUSAL, CAUSAL, LaggedDesign, build_lagged, intersect_designs

console = logging.getLogger(__name__)

CCA_DESCRIPTOR = 'cca.json'
MAX_CONDITION = 1e12
NULL_TOLERANCE = 1e-10
PCA_SPACES = ('channel', 'lag')


@dataclass(frozen=True)
class PcaBasis:
    """ Leading principal directions of the training data, stored as (d, k) columns. """

    components: np.ndarray
    mean: np.ndarray
    explained_variance: np.ndarray
    space: str = 'channel'

    @property
    def n_components(self) -> int:
        return self.components.shape[1]

    def project(self, data: np.ndarray) -> np.ndarray:
        return (np.asarray(data, dtype=np.float64) - self.mean) @ self.components

    def reconstruct(self, projected: np.ndarray) -> np.ndarray:
        return projected @ self.components.T + self.mean


def _num_components(eigenvalues: np.ndarray, var_keep: Union[int, float], rank: int) -> int:
    if isinstance(var_keep, (int, np.integer)) and not isinstance(var_keep, bool):
        if var_keep > rank:
            warnings.warn(f"Requested {var_keep} principal components but the data has rank {rank}; keeping {rank}")
        return max(1, min(int(var_keep), rank))
    if not 0 < var_keep <= 1:
        raise ParameterError(f"Retained variance fraction must lie in (0, 1], got {var_keep}")
    if var_keep >= 1.0:
        return rank
    ratio = np.cumsum(eigenvalues[:rank]) / np.sum(eigenvalues[:rank])
    return int(min(np.searchsorted(ratio, var_keep - 1e-12) + 1, rank))


def fit_pca(blocks: Sequence[np.ndarray], var_keep: Union[int, float] = 1.0, space: str = 'channel') -> PcaBasis:
    """ Principal components of the rows of all `blocks` pooled together.

    Args:
        blocks: (n_i, d) arrays, e.g. one EEG segment each.
        var_keep: an int is a component count, a float the fraction of variance to keep.
            Directions with variance below 1e-10 times the largest are never kept.
        space: recorded on the basis; 'channel' or 'lag'.
    """
    blocks = [np.asarray(block, dtype=np.float64) for block in blocks]
    if len(blocks) == 0:
        raise ParameterError("PCA needs at least one block of data")
    n = sum(block.shape[0] for block in blocks)
    mean = np.sum(np.stack([block.sum(axis=0) for block in blocks]), axis=0) / n
    scatter = np.sum(np.stack([(block - mean).T @ (block - mean) for block in blocks]), axis=0)
    covariance = 0.5 * (scatter + scatter.T) / max(n - 1, 1)

    eigenvalues, eigenvectors = linalg.eigh(covariance)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues, eigenvectors = eigenvalues[order], eigenvectors[:, order]
    top = max(float(eigenvalues[0]), 0.0)
    rank = int(np.sum(eigenvalues > NULL_TOLERANCE * top)) if top > 0 else 0
    if rank == 0:
        raise ParameterError("PCA input has no variance")
    if rank < covariance.shape[0]:
        warnings.warn(f"PCA input of dimension {covariance.shape[0]} has rank {rank}; null directions are dropped")

    k = _num_components(eigenvalues, var_keep, rank)
    components = eigenvectors[:, :k]
    # largest-magnitude loading of every component is positive
    signs = np.sign(components[np.argmax(np.abs(components), axis=0), np.arange(k)])
    components = components * np.where(signs == 0, 1.0, signs)
    return PcaBasis(components, mean, eigenvalues[:k], space)


def pca_reduce(X: Union[LaggedDesign, MultiChannel], var_keep: Union[int, float] = 1.0,
               basis: Optional[PcaBasis] = None) -> Tuple[Union[LaggedDesign, MultiChannel], PcaBasis]:
    """ Projects a recording (channel space) or a lagged design (lag space) on its principal components.

    When `basis` is given it is re-used, so test data is projected with the training basis.
    """
    if isinstance(X, LaggedDesign):
        basis = basis if basis is not None else fit_pca([X.matrix], var_keep, 'lag')
        return LaggedDesign(basis.project(X.matrix), X.direction, 1, basis.n_components, X.first_index, X.fs), basis
    basis = basis if basis is not None else fit_pca([X.data], var_keep, 'channel')
    labels = [f"pc{k + 1}" for k in range(basis.n_components)]
    return MultiChannel(basis.project(X.data), X.fs, labels), basis


@dataclass(frozen=True)
class CcaStats:
    """ Sums over aligned rows of the EEG design x and the envelope design y. """

    n: int
    sum_x: np.ndarray
    sum_y: np.ndarray
    Sxx: np.ndarray
    Syy: np.ndarray
    Sxy: np.ndarray

    def __add__(self, other: 'CcaStats') -> 'CcaStats':
        return CcaStats(self.n + other.n, self.sum_x + other.sum_x, self.sum_y + other.sum_y,
                        self.Sxx + other.Sxx, self.Syy + other.Syy, self.Sxy + other.Sxy)

    def __sub__(self, other: 'CcaStats') -> 'CcaStats':
        return CcaStats(self.n - other.n, self.sum_x - other.sum_x, self.sum_y - other.sum_y,
                        self.Sxx - other.Sxx, self.Syy - other.Syy, self.Sxy - other.Sxy)

    def covariances(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        if self.n < 2:
            raise ParameterError(f"Covariances need at least two rows, got {self.n}")
        mx, my = self.sum_x / self.n, self.sum_y / self.n
        Cxx = (self.Sxx - self.n * np.outer(mx, mx)) / (self.n - 1)
        Cyy = (self.Syy - self.n * np.outer(my, my)) / (self.n - 1)
        Cxy = (self.Sxy - self.n * np.outer(mx, my)) / (self.n - 1)
        return 0.5 * (Cxx + Cxx.T), 0.5 * (Cyy + Cyy.T), Cxy


def cca_stats(Xeeg: LaggedDesign, Xenv: LaggedDesign) -> CcaStats:
    """ Statistics of two designs restricted to the time indices both cover. """
    Xeeg, Xenv = intersect_designs(Xeeg, Xenv)
    x, y = Xeeg.matrix, Xenv.matrix
    return CcaStats(x.shape[0], x.sum(axis=0), y.sum(axis=0), x.T @ x, y.T @ y, x.T @ y)


def sum_cca_stats(stats: Sequence[CcaStats]) -> CcaStats:
    if len(stats) == 0:
        raise ParameterError("Cannot sum zero CCA statistics")
    total = stats[0]
    for st in stats[1:]:
        total = total + st
    return total


@dataclass
class CcaModel:
    Wx: np.ndarray
    Ws: np.ndarray
    train_correlations: np.ndarray
    L: int = 1
    La: int = 1
    pca_basis: Optional[PcaBasis] = None

    def __post_init__(self):
        if self.Wx.shape[1] != self.Ws.shape[1] or self.Wx.shape[1] < 1:
            raise ParameterError(f"Filter banks hold {self.Wx.shape[1]} and {self.Ws.shape[1]} components")

    @property
    def J(self) -> int:
        return self.Wx.shape[1]

    def truncate(self, J: int) -> 'CcaModel':
        if not 1 <= J <= self.J:
            raise ParameterError(f"Cannot keep {J} of {self.J} components")
        return CcaModel(self.Wx[:, :J].copy(), self.Ws[:, :J].copy(), self.train_correlations[:J].copy(),
                        self.L, self.La, self.pca_basis)

    def eeg_design(self, eeg: MultiChannel) -> LaggedDesign:
        return eeg_design(eeg, self.L, self.pca_basis)

    def envelope_design(self, envelope: Signal, pad: bool = False) -> LaggedDesign:
        return envelope_design(envelope, self.La, pad)


def eeg_design(eeg: MultiChannel, L: int, pca_basis: Optional[PcaBasis] = None) -> LaggedDesign:
    """ Anti-causal design of `eeg`, projected on `pca_basis` in its own space. """
    if pca_basis is None:
        return build_lagged(eeg, L, ANTI_CAUSAL)
    if pca_basis.space == 'channel':
        reduced, _ = pca_reduce(eeg, basis=pca_basis)
        return build_lagged(reduced, L, ANTI_CAUSAL)
    reduced, _ = pca_reduce(build_lagged(eeg, L, ANTI_CAUSAL), basis=pca_basis)
    return reduced


def envelope_design(envelope: Signal, La: int, pad: bool = False) -> LaggedDesign:
    """ Causal design of `envelope`.

    With `pad` the envelope is preceded by L_a - 1 zeros, so row t belongs to time t of the
    original signal and every sample of a held-out window gets a row.
    """
    if not pad:
        return build_lagged(envelope, La, CAUSAL)
    padded = Signal(np.concatenate([np.zeros(La - 1), envelope.samples]), envelope.fs)
    design = build_lagged(padded, La, CAUSAL)
    return LaggedDesign(design.matrix, CAUSAL, La, 1, 0, envelope.fs)


def _whitener(C: np.ndarray, name: str, drop_null: bool) -> np.ndarray:
    """ (d, r) matrix W with W' C W = I.

    Without `drop_null` an ill-conditioned covariance raises; with it, directions whose
    variance is below 1e-10 times the largest are left out of the whitened space.
    """
    eigenvalues, eigenvectors = linalg.eigh(C)
    top = float(eigenvalues[-1])
    if top <= 0:
        raise IllConditionedError(f"{name} covariance has no variance")
    if drop_null:
        keep = eigenvalues > NULL_TOLERANCE * top
        eigenvalues, eigenvectors = eigenvalues[keep], eigenvectors[:, keep]
    elif eigenvalues[0] <= 0 or top / eigenvalues[0] > MAX_CONDITION:
        condition = np.inf if eigenvalues[0] <= 0 else top / eigenvalues[0]
        raise IllConditionedError(
            f"{name} covariance has condition number {condition:.3g} > {MAX_CONDITION:g}; "
            f"reduce the EEG dimension with PCA (pca_var_keep)")
    return eigenvectors / np.sqrt(eigenvalues)


def fit_cca_from_stats(stats: CcaStats, J: Optional[int] = None, L: int = 1, La: int = 1,
                       pca_basis: Optional[PcaBasis] = None, drop_null: bool = False) -> CcaModel:
    """ Canonical directions from the SVD of the whitened cross-covariance Wx' Cxy Wy.

    J defaults to the largest available number of components.
    """
    Cxx, Cyy, Cxy = stats.covariances()
    Wx = _whitener(Cxx, 'EEG', drop_null)
    Wy = _whitener(Cyy, 'Envelope', drop_null)
    J_max = min(Wx.shape[1], Wy.shape[1])
    J = J_max if J is None else J
    if not 1 <= J <= J_max:
        raise ParameterError(f"Number of components must lie in [1, {J_max}], got {J}")

    U, S, Vt = linalg.svd(Wx.T @ Cxy @ Wy, full_matrices=False)
    Wx = Wx @ U[:, :J]
    Ws = Wy @ Vt[:J].T

    # fix the sign ambiguity: the largest-magnitude forward coefficient is positive
    signs = np.sign(Ws[np.argmax(np.abs(Ws), axis=0), np.arange(J)])
    signs = np.where(signs == 0, 1.0, signs)
    return CcaModel(Wx * signs, Ws * signs, np.clip(S[:J], 0.0, 1.0), L, La, pca_basis)


def fit_cca(Xeeg: LaggedDesign, Xenv: LaggedDesign, J: Optional[int] = None,
            pca_basis: Optional[PcaBasis] = None) -> CcaModel:
    """ Fits J components on two designs aligned on their common time indices.

    Raises:
        IllConditionedError: if either covariance has a condition number above 1e12.
    """
    return fit_cca_from_stats(cca_stats(Xeeg, Xenv), J, Xeeg.L, Xenv.L, pca_basis)


def cca_correlations(model: CcaModel, Xeeg: LaggedDesign, Xenv: LaggedDesign,
                     rows: Optional[Tuple[int, int]] = None) -> Tuple[np.ndarray, bool]:
    """ Per-component Pearson correlations of the backward and forward filter outputs.

    `rows` restricts both designs to a window [start, end) in time. Returns the J
    correlations and whether every component was degenerate.
    """
    if rows is not None:
        Xeeg, Xenv = Xeeg.restrict(*rows), Xenv.restrict(*rows)
    Xeeg, Xenv = intersect_designs(Xeeg, Xenv)
    if Xeeg.cols != model.Wx.shape[0] or Xenv.cols != model.Ws.shape[0]:
        raise ParameterError(
            f"Designs have {Xeeg.cols} and {Xenv.cols} columns, the model expects "
            f"{model.Wx.shape[0]} and {model.Ws.shape[0]}")
    if Xeeg.rows < 2:
        return np.zeros(model.J), True
    rho, flags = pearson_columns(Xeeg.matrix @ model.Wx, Xenv.matrix @ model.Ws)
    return rho, bool(np.all(flags))


def cca_feature(rho_1: np.ndarray, rho_2: np.ndarray) -> np.ndarray:
    rho_1, rho_2 = np.asarray(rho_1, dtype=np.float64), np.asarray(rho_2, dtype=np.float64)
    if rho_1.shape != rho_2.shape:
        raise ParameterError(f"Correlation vectors differ in length: {rho_1.shape[0]} and {rho_2.shape[0]}")
    return rho_1 - rho_2


def decide_from_correlations(lda: LdaClassifier, rhos: Sequence[np.ndarray], degenerate: bool = False) -> Decision:
    """ Two speakers: the sign of the LDA score of rho_1 - rho_2. More speakers: pairwise
    comparisons in a round robin, a tied comparison scoring half a win for both. """
    if len(rhos) < 2:
        raise ParameterError(f"At least two speakers are needed, got {len(rhos)}")
    if len(rhos) == 2:
        score = float(lda.decision_function(cca_feature(rhos[0], rhos[1])))
        return argmax_decision([score, -score], degenerate)
    wins = np.zeros(len(rhos))
    for i in range(len(rhos)):
        for j in range(i + 1, len(rhos)):
            score = float(lda.decision_function(cca_feature(rhos[i], rhos[j])))
            if score > 0:
                wins[i] += 1
            elif score < 0:
                wins[j] += 1
            else:
                wins[i] += 0.5
                wins[j] += 0.5
    return argmax_decision(wins, degenerate)


def cca_decide(model: CcaModel, lda: LdaClassifier, eeg: Union[MultiChannel, LaggedDesign],
               envelopes: Sequence[Union[Signal, LaggedDesign]]) -> Decision:
    """ Decides one window given its EEG and one envelope per speaker. """
    Xeeg = eeg if isinstance(eeg, LaggedDesign) else model.eeg_design(eeg)
    rhos, flags = [], []
    for envelope in envelopes:
        Xenv = envelope if isinstance(envelope, LaggedDesign) else model.envelope_design(envelope, pad=True)
        rho, degenerate = cca_correlations(model, Xeeg, Xenv)
        rhos.append(rho)
        flags.append(degenerate)
    return decide_from_correlations(lda, rhos, all(flags))


@dataclass
class _TrainingSet:
    keys: Tuple[tuple, ...]
    pca_basis: Optional[PcaBasis]
    stats: List[CcaStats]
    total: CcaStats
    features: Dict[Optional[int], Tuple[int, List[List[np.ndarray]]]] = field(default_factory=dict)


class CcaDecoder(BaseDecoder):
    """ CCA filters plus an LDA on correlation differences.

    Fitting runs an extra leave-one-segment-out loop over the training segments: the CCA
    is refitted without each segment (by subtracting its statistics) and the features of
    that segment's windows train the LDA. The number of components J is chosen by an inner
    CV over the same out-of-sample features. Numerically null directions of the lagged
    designs are left out of the whitening, since band-limited signals make them rank-deficient.
    """

    def __init__(
            self,
            lags: float = 0.25,
            envelope_lags: float = 1.25,
            pca_var_keep: Union[int, float] = 1.0,
            pca_space: str = 'channel',
            max_components: Optional[int] = None,
            inner_folds: int = 10,
            preprocessing: PreprocessingConfig = LINEAR_PREPROCESSING,
    ):
        if pca_space not in PCA_SPACES:
            raise ParameterError(f"PCA space {pca_space} not available, choose from {PCA_SPACES}")
        self.preprocessing = preprocessing
        self.L = self.seconds_to_lags(lags, preprocessing.fs)
        self.La = self.seconds_to_lags(envelope_lags, preprocessing.fs)
        self.pca_var_keep = pca_var_keep
        self.pca_space = pca_space
        self.max_components = max_components
        self.inner_folds = inner_folds
        # J is chosen inside fit, so the harness only refits per window length
        self.tuning = 'per_tau'
        self.model: Optional[CcaModel] = None
        self.lda: Optional[LdaClassifier] = None
        self._training: Optional[_TrainingSet] = None

    def reset(self) -> None:
        self._training = None

    def _fit_pca(self, segments: Sequence[Trial]) -> PcaBasis:
        if self.pca_space == 'channel':
            return fit_pca([segment.eeg.data for segment in segments], self.pca_var_keep, 'channel')
        blocks = [build_lagged(segment.eeg, self.L, ANTI_CAUSAL).matrix for segment in segments]
        return fit_pca(blocks, self.pca_var_keep, 'lag')

    def _training_set(self, segments: Sequence[Trial]) -> _TrainingSet:
        keys = tuple(segment.key for segment in segments)
        if self._training is not None and self._training.keys == keys:
            return self._training
        pca_basis = self._fit_pca(segments)
        stats = [cca_stats(eeg_design(segment.eeg, self.L, pca_basis),
                           envelope_design(segment.envelopes[segment.attended], self.La))
                 for segment in segments]
        self._training = _TrainingSet(keys, pca_basis, stats, sum_cca_stats(stats))
        return self._training

    def _fit(self, stats: CcaStats, pca_basis: PcaBasis, J: Optional[int] = None) -> CcaModel:
        model = fit_cca_from_stats(stats, None, self.L, self.La, pca_basis, drop_null=True)
        J = model.J if J is None else min(J, model.J)
        if self.max_components is not None:
            J = min(J, self.max_components)
        return model.truncate(J)

    def _segment_correlations(self, model: CcaModel, segment: Trial,
                              window_length: Optional[int]) -> List[Tuple[List[np.ndarray], bool]]:
        """ Correlations of every speaker in every window of `segment`, designs built once. """
        # both designs start at time 0 of the segment
        outputs = eeg_design(segment.eeg, model.L, model.pca_basis).matrix @ model.Wx
        envelope_outputs = [envelope_design(envelope, model.La, pad=True).matrix @ model.Ws
                            for envelope in segment.envelopes]
        out = []
        for start, end in self.window_bounds(len(segment), window_length):
            lo, hi = self.window_rows(0, outputs.shape[0], start, end)
            rhos, flags = [], []
            for envelope_output in envelope_outputs:
                if hi - lo < 2:
                    rho, degenerate = np.zeros(model.J), np.ones(model.J, dtype=bool)
                else:
                    rho, degenerate = pearson_columns(outputs[lo:hi], envelope_output[lo:hi])
                rhos.append(rho)
                flags.append(bool(np.all(degenerate)))
            out.append((rhos, all(flags)))
        return out

    def _features(self, model: CcaModel, segment: Trial, window_length: Optional[int]) -> List[np.ndarray]:
        features = []
        for rhos, _ in self._segment_correlations(model, segment, window_length):
            for i, rho in enumerate(rhos):
                if i != segment.attended:
                    features.append(cca_feature(rhos[segment.attended], rho))
        return features

    def _held_out_features(self, segments: Sequence[Trial], training: _TrainingSet,
                           window_length: Optional[int]) -> Tuple[int, List[List[np.ndarray]]]:
        if window_length not in training.features:
            models = [self._fit(training.total - training.stats[k], training.pca_basis)
                      for k in range(len(segments))]
            J_max = min(model.J for model in models)
            features = [self._features(model.truncate(J_max), segment, window_length)
                        for model, segment in zip(models, segments)]
            training.features[window_length] = (J_max, features)
        return training.features[window_length]

    def fit(self, segments: Sequence[Trial], window_length: Optional[int] = None) -> 'CcaDecoder':
        if len(segments) == 0:
            raise ParameterError("At least one training segment is required")
        training = self._training_set(segments)

        if len(segments) == 1:
            full = self._fit(training.total, training.pca_basis)
            features = [self._features(full, segments[0], window_length)]
            J = full.J
        else:
            J_max, features = self._held_out_features(segments, training, window_length)

            def objective(train_idx, val_idx, J):
                train = [np.stack(features[i])[:, :J] for i in train_idx if features[i]]
                val = [np.stack(features[i])[:, :J] for i in val_idx if features[i]]
                if not train or not val:
                    return 0.0
                train = np.concatenate(train)
                lda = fit_lda(train, np.ones(train.shape[0], dtype=bool))
                return 100.0 * float(np.mean(lda.decision_function(np.concatenate(val)) > 0))

            J, _ = inner_cv(len(segments), list(range(1, J_max + 1)), objective, self.inner_folds)
            full = self._fit(training.total, training.pca_basis, J)
            J = full.J

        pooled = [np.stack(f)[:, :J] for f in features if f]
        if not pooled:
            raise InsufficientDataError(f"No decision window of {window_length} samples fits the training segments")
        pooled = np.concatenate(pooled)
        self.lda = fit_lda(pooled, np.ones(pooled.shape[0], dtype=bool))
        self.model = full
        console.info(f"CCA fitted with J = {J} components on {len(segments)} segments")
        return self

    def _check_fitted(self):
        if self.model is None or self.lda is None:
            raise ParameterError("Decoder is not fitted")

    def decide(self, window: Trial) -> Decision:
        self._check_fitted()
        return cca_decide(self.model, self.lda, window.eeg, window.envelopes)

    def decide_segment(self, segment: Trial, window_length: int) -> List[Decision]:
        """ Filters the whole segment once, then correlates the outputs window by window. """
        self._check_fitted()
        return [decide_from_correlations(self.lda, rhos, degenerate)
                for rhos, degenerate in self._segment_correlations(self.model, segment, window_length)]

    def save_pretrained(self, save_directory: str) -> None:
        self._check_fitted()
        descriptor: Dict[str, Any] = {
            'L': self.model.L, 'La': self.model.La, 'J': self.model.J,
            'lda_bias': self.lda.bias, 'lda_regularized': self.lda.regularized, 'pca_space': None}
        blocks = {'Wx': self.model.Wx, 'Ws': self.model.Ws, 'rho': self.model.train_correlations,
                  'lda_weights': self.lda.weights}
        if self.model.pca_basis is not None:
            descriptor['pca_space'] = self.model.pca_basis.space
            blocks.update(pca_components=self.model.pca_basis.components, pca_mean=self.model.pca_basis.mean,
                          pca_variance=self.model.pca_basis.explained_variance)
        write_blocks(save_directory, CCA_DESCRIPTOR, descriptor, blocks)

    @classmethod
    def load_pretrained(cls, save_directory: str) -> 'CcaDecoder':
        descriptor, blocks = read_blocks(save_directory, CCA_DESCRIPTOR)
        pca_basis = None
        if descriptor['pca_space'] is not None:
            pca_basis = PcaBasis(blocks['pca_components'], blocks['pca_mean'][:, 0],
                                 blocks['pca_variance'][:, 0], descriptor['pca_space'])
        decoder = cls(pca_space=pca_basis.space if pca_basis is not None else 'channel')
        decoder.L, decoder.La = descriptor['L'], descriptor['La']
        decoder.model = CcaModel(blocks['Wx'], blocks['Ws'], blocks['rho'][:, 0], descriptor['L'], descriptor['La'],
                                 pca_basis)
        decoder.lda = LdaClassifier(blocks['lda_weights'][:, 0], descriptor['lda_bias'], descriptor['lda_regularized'])
        return decoder

    @classmethod
    def from_config(cls, config: AlgorithmConfig, inner_folds: int = 10) -> 'CcaDecoder':
        return cls(
            lags=config.lags,
            envelope_lags=config.envelope_lags,
            pca_var_keep=config.pca_var_keep,
            pca_space=config.pca_space,
            max_components=config.max_components,
            inner_folds=inner_folds,
            preprocessing=config.preprocessing if config.preprocessing is not None else LINEAR_PREPROCESSING)
