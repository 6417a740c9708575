""" Two-stage cross-validation harness.

Every subject's preprocessed recording is cut into 60 s segments. The outer loop
leaves one segment out, fits normalisation statistics and a fresh decoder on the
remaining ones and decides every disjoint window of the held-out segment, for each
decision window length. How the decoder's hyperparameter is chosen inside a fold
is declared by the decoder's `tuning` attribute:

    global              inner CV once at the longest window, one fit for all lengths
    per_tau             inner CV (if the decoder has a grid) and a fit per window length
    training_accuracy   the decoder tunes itself in `fit`, refitted per window length
    none                one fit for all lengths
"""

import os
import logging
import warnings

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from joblib import Parallel, delayed
from tqdm import tqdm

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.configs.evaluation import EvaluationConfig
from aadbench.configs.run import RunConfig
from aadbench.models.adaptive import write_diagnostics
from aadbench.models.auto import AutoDecoder
from aadbench.models.base import BaseDecoder, Decision, TUNING_POLICIES
from aadbench.utils.data import dict_checksum, file_checksum, write_dict_to_file
from aadbench.utils.datasets.auto import AutoDataset
from aadbench.utils.datasets.directory import MANIFEST_NAME
from aadbench.utils.evaluators.folds import INNER_FOLDS, inner_cv
from aadbench.utils.evaluators.report import curve_report
from aadbench.utils.exceptions import AADError, FoldError, InsufficientDataError, ParameterError
from aadbench.utils.loggers.auto import AutoLogger
from aadbench.utils.metrics.accuracy import accuracy
from aadbench.utils.metrics.curve import CurvePoint, PerformanceCurve
from aadbench.utils.metrics.mesd import MesdResult, mesd
from aadbench.utils.runtime import versions
from aadbench.utils.signals.base import Trial
from aadbench.utils.signals.preprocessing import filter_trial, normalize_folds

console = logging.getLogger(__name__)

SEGMENT_LENGTH = 60.0
MANIFEST_FILE = 'run_manifest.json'
DIAGNOSTICS_DIR = 'diagnostics'

DecoderFactory = Callable[[], BaseDecoder]


@dataclass(frozen=True)
class Segment:
    """ A contiguous, non-overlapping piece of one trial. """

    view: Trial
    index: int

    @property
    def subject_id(self) -> str:
        return self.view.subject_id

    @property
    def trial_id(self) -> str:
        return self.view.trial_id

    @property
    def start(self) -> int:
        return self.view.offset

    @property
    def end(self) -> int:
        return self.view.offset + len(self.view)

    @property
    def key(self) -> tuple:
        return self.view.key


def segment_dataset(trials: Sequence[Trial], seg_len: float = SEGMENT_LENGTH) -> List[Segment]:
    """ Cuts every trial into as many disjoint `seg_len`-second segments as fit; the remainder is dropped.

    Trials shorter than one segment are skipped with a warning.
    """
    if seg_len <= 0:
        raise ParameterError(f"Segment length must be positive, got {seg_len}")
    segments, dropped = [], 0
    for trial in trials:
        n = int(round(seg_len * trial.fs))
        count = len(trial) // n
        if count == 0:
            warnings.warn(f"Trial {trial.subject_id}/{trial.trial_id} ({trial.duration:.2f} s) is shorter than "
                          f"one {seg_len} s segment, skipped")
            dropped += len(trial)
            continue
        for k in range(count):
            segments.append(Segment(trial.slice(k * n, (k + 1) * n), len(segments)))
        dropped += len(trial) - count * n
    console.info(f"Cut {len(trials)} trials into {len(segments)} segments of {seg_len} s, "
                 f"{dropped} samples dropped")
    return segments


def _decisions(decoder: BaseDecoder, segments: Sequence[Trial], window_length: int) -> List[Tuple[int, int]]:
    return [(decision.speaker, segment.attended)
            for segment in segments for decision in decoder.decide_segment(segment, window_length)]


def _inner_accuracy(decoder: BaseDecoder, train: Sequence[Trial], window_length: int):
    def objective(train_idx: np.ndarray, val_idx: np.ndarray, value: Any) -> float:
        decoder.set_hyperparameter(value)
        decoder.fit([train[i] for i in train_idx], window_length)
        decisions = _decisions(decoder, [train[i] for i in val_idx], window_length)
        return accuracy(decisions) if decisions else 0.0
    return objective


def tune(decoder: BaseDecoder, train: Sequence[Trial], window_length: int, inner_folds: int = INNER_FOLDS) -> Any:
    """ Sets the decoder's hyperparameter by inner cross-validation over `train`. """
    grid = decoder.hyperparameter_grid()
    if len(grid) == 0:
        return None
    best, _ = inner_cv(len(train), grid, _inner_accuracy(decoder, train, window_length), inner_folds)
    decoder.set_hyperparameter(best)
    return best


def _fold(decoder: BaseDecoder, train: List[Trial], test: Trial, windows: List[int],
          inner_folds: int) -> Dict[int, List[Decision]]:
    policy = decoder.tuning
    if policy not in TUNING_POLICIES:
        raise ParameterError(f"Unknown tuning policy {policy}")
    decisions = {}
    if policy in ('global', 'none'):
        if policy == 'global':
            tune(decoder, train, windows[-1], inner_folds)
        decoder.fit(train, windows[-1] if policy == 'global' else None)
        for w in windows:
            decisions[w] = decoder.decide_segment(test, w)
    else:
        for w in windows:
            if policy == 'per_tau':
                tune(decoder, train, w, inner_folds)
            decoder.fit(train, w)
            decisions[w] = decoder.decide_segment(test, w)
    return decisions


def run_loso_cv(
        algorithm: Union[AlgorithmConfig, DecoderFactory],
        segments: Sequence[Segment],
        taus: Sequence[float],
        inner_folds: int = INNER_FOLDS,
        name: Optional[str] = None,
        diagnostics: Optional[List[Dict[str, Any]]] = None,
        progress: bool = False,
) -> PerformanceCurve:
    """ Leave-one-segment-out accuracy curve of one algorithm on one subject's segments.

    Args:
        algorithm: an algorithm config, or a factory returning a fresh decoder.
        segments: filtered (not yet normalised) segments of one subject.
        taus: decision window lengths in seconds, each at most one segment long.
        diagnostics: when given, per-window rows of decoders that keep them are appended.

    Raises:
        InsufficientDataError: with fewer than two segments.
        FoldError: wrapping any failure inside an outer fold, with subject and fold.
    """
    if len(segments) < 2:
        raise InsufficientDataError(f"Leave-one-segment-out needs at least two segments, got {len(segments)}")
    if isinstance(algorithm, AlgorithmConfig):
        config = algorithm
        name = name if name is not None else config.name

        def factory():
            return AutoDecoder.from_config(config, inner_folds=inner_folds)
    else:
        factory = algorithm
    name = name if name is not None else 'decoder'

    subject_id = segments[0].subject_id
    fs = segments[0].view.fs
    taus = sorted(float(tau) for tau in taus)
    windows = [int(round(tau * fs)) for tau in taus]
    shortest = min(len(segment.view) for segment in segments)
    if windows[-1] > shortest:
        raise ParameterError(f"Window of {taus[-1]} s is longer than the shortest segment ({shortest / fs:.2f} s)")

    outcomes = {w: [] for w in windows}
    for k in tqdm(range(len(segments)), desc=f"{name}/{subject_id}", disable=not progress):
        try:
            decoder = factory()
            train = [segment.view for i, segment in enumerate(segments) if i != k]
            test = segments[k].view
            if decoder.preprocessing.normalize:
                train, (test,), _ = normalize_folds(train, [test])
            for w, decisions in _fold(decoder, train, test, windows, inner_folds).items():
                outcomes[w].extend((decision.speaker, test.attended) for decision in decisions)
            if diagnostics is not None and hasattr(decoder, 'diagnostics'):
                diagnostics.extend(dict(row, fold=k) for row in decoder.diagnostics)
        except Exception as e:
            raise FoldError(f"{name} failed on subject {subject_id}, outer fold {k} "
                            f"(segment {segments[k].key}): {e}", subject_id, k) from e
        console.debug(f"{name}/{subject_id}: fold {k + 1}/{len(segments)} done")

    points = [CurvePoint(tau, accuracy(outcomes[w]), len(outcomes[w])) for tau, w in zip(taus, windows)]
    curve = PerformanceCurve(subject_id=subject_id, algorithm=name, points=points)
    console.info(f"{name}/{subject_id}: " + ", ".join(f"{p.tau:g} s {p.accuracy:.2f}%" for p in curve.points))
    return curve


@dataclass
class SubjectResult:
    subject_id: str
    algorithm: str
    curve: Optional[PerformanceCurve] = None
    mesd: Optional[MesdResult] = None
    diagnostics: List[Dict[str, Any]] = field(default_factory=list)
    error: Optional[str] = None


def evaluate_subject(config: AlgorithmConfig, trials: Sequence[Trial], evaluation: EvaluationConfig,
                     progress: bool = False) -> SubjectResult:
    """ Preprocesses one subject's trials, runs the harness and computes the MESD.

    Data-related failures are returned in `error` so that a run can continue with the other subjects.
    """
    subject_id = trials[0].subject_id
    result = SubjectResult(subject_id=subject_id, algorithm=config.name)
    try:
        preprocessing = AutoDecoder.from_config(config, inner_folds=evaluation.inner_folds).preprocessing
        segments = segment_dataset([filter_trial(trial, preprocessing) for trial in trials],
                                   evaluation.segment_length)
        result.curve = run_loso_cv(config, segments, evaluation.taus, evaluation.inner_folds,
                                   diagnostics=result.diagnostics if evaluation.write_diagnostics else None,
                                   progress=progress)
        result.mesd = mesd(result.curve, evaluation.mesd)
    except AADError as e:
        console.error(f"{config.name} failed on subject {subject_id}: {e}")
        result.error = str(e)
    return result


@dataclass
class EvaluationResult:
    results: List[SubjectResult]
    paths: Dict[str, str]

    @property
    def curves(self) -> List[PerformanceCurve]:
        return [result.curve for result in self.results if result.curve is not None]

    @property
    def failures(self) -> List[SubjectResult]:
        return [result for result in self.results if result.error is not None]


def _dataset_checksum(config: RunConfig) -> str:
    if config.dataset.dataset_name == 'directory':
        return file_checksum(os.path.join(config.dataset.path, MANIFEST_NAME))
    return dict_checksum(config.dataset.to_dict())


def _seeded(algorithm: AlgorithmConfig, seed: int) -> AlgorithmConfig:
    return AlgorithmConfig.from_dict(dict(algorithm.to_dict(), seed=seed))


def run_manifest(config: RunConfig, dataset_checksum: str, failures: Sequence[SubjectResult]) -> Dict[str, Any]:
    config_dict = config.to_dict()
    grids = {}
    for algorithm in config.algorithms:
        decoder = AutoDecoder.from_config(algorithm, inner_folds=config.evaluation.inner_folds)
        grids[algorithm.name] = [float(value) for value in decoder.hyperparameter_grid()]
    return {
        'config': config_dict,
        'config_sha256': dict_checksum(config_dict),
        'seed': config.seed,
        'workers': config.workers,
        'taus': config.evaluation.taus,
        'grids': grids,
        'dataset_sha256': dataset_checksum,
        'versions': versions(),
        'failures': [{'algorithm': f.algorithm, 'subject': f.subject_id, 'error': f.error} for f in failures],
    }


def run_evaluation(config: RunConfig, out_dir: Optional[str] = None, progress: bool = True) -> EvaluationResult:
    """ Evaluates every algorithm on every subject and writes curves, MESD values and the run manifest.

    Tasks run over a pool of `config.workers` processes; results are collected in task
    order, so the output does not depend on the worker count.
    """
    out_dir = out_dir if out_dir is not None else config.out_dir
    os.makedirs(out_dir, exist_ok=True)
    dataset = AutoDataset.from_config(config.dataset)
    checksum = _dataset_checksum(config)
    subjects = dataset.by_subject()
    algorithms = [_seeded(algorithm, config.seed) for algorithm in config.algorithms]
    console.info(f"Evaluating {len(algorithms)} algorithms on {len(subjects)} subjects with {config.workers} workers")

    tasks = [(algorithm, trials) for algorithm in algorithms for trials in subjects.values()]
    results = Parallel(n_jobs=config.workers)(
        delayed(evaluate_subject)(algorithm, trials, config.evaluation, progress and config.workers == 1)
        for algorithm, trials in tqdm(tasks, desc='evaluate', disable=not progress))

    done = [result for result in results if result.curve is not None]
    paths = curve_report([r.curve for r in done], out_dir, [r.mesd for r in done])
    if config.evaluation.write_diagnostics:
        for result in done:
            if result.diagnostics:
                diagnostics_dir = os.path.join(out_dir, DIAGNOSTICS_DIR)
                os.makedirs(diagnostics_dir, exist_ok=True)
                path = os.path.join(diagnostics_dir, f"{result.algorithm}_{result.subject_id}.csv")
                write_diagnostics(result.diagnostics, path)

    failures = [result for result in results if result.error is not None]
    paths['manifest'] = os.path.join(out_dir, MANIFEST_FILE)
    write_dict_to_file(run_manifest(config, checksum, failures), paths['manifest'])

    if config.logger is not None:
        logger = AutoLogger.from_config(config.logger)
        logger.store_configs(config)
        logger.init_run()
        logger.log_curves([record for r in done for record in r.curve.to_records()])
        logger.log({f"mesd/{r.algorithm}/{r.subject_id}": r.mesd.mesd_seconds for r in done})
        for algorithm in dict.fromkeys(r.algorithm for r in done):
            logger.log_diagnostics(algorithm, [dict(row, subject_id=r.subject_id)
                                               for r in done if r.algorithm == algorithm for row in r.diagnostics])
        logger.finish()

    for failure in failures:
        console.warning(f"Failed: {failure.algorithm} on subject {failure.subject_id}: {failure.error}")
    console.info(f"Evaluation finished: {len(done)} curves, {len(failures)} failures, results in {out_dir}")
    return EvaluationResult(results, paths)
