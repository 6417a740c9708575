import json
import os

import pytest

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.configs.evaluation import EvaluationConfig
from aadbench.configs.preprocessing import LINEAR_PREPROCESSING
from aadbench.configs.run import RunConfig
from aadbench.models.baselines import OracleDecoder
from aadbench.models.base import weights_digest
from aadbench.models.mmse import MmseDecoder
from aadbench.utils.evaluators.crossval import (
    MANIFEST_FILE, Segment, evaluate_subject, run_evaluation, run_loso_cv, segment_dataset)
from aadbench.utils.evaluators.report import CURVES_FILE, MESD_FILE, read_curves
from aadbench.utils.exceptions import FoldError, InsufficientDataError, ParameterError
from aadbench.utils.metrics.accuracy import binomial_interval
from aadbench.utils.signals.preprocessing import filter_trial


@pytest.fixture(scope='module')
def subject_segments(small_synth_trials):
    """ The four filtered 60 s segments of subject s00. """
    trials = [filter_trial(trial, LINEAR_PREPROCESSING) for trial in small_synth_trials if trial.subject_id == 's00']
    return segment_dataset(trials, 60.0)


class RecordingDecoder(OracleDecoder):

    def __init__(self):
        self.fitted = []

    def fit(self, segments, window_length=None):
        self.fitted.extend(segment.key for segment in segments)
        return self


class FailingDecoder(OracleDecoder):

    def fit(self, segments, window_length=None):
        raise RuntimeError("broken decoder")


def _run_config(tmp_path, algorithms, workers=1):
    return RunConfig(
        dataset={'dataset_name': 'synthetic',
                 'synth': {'n_channels': 2, 'duration': 180.0, 'n_subjects': 2, 'seed': 5}},
        algorithms=algorithms,
        evaluation={'taus': [10.0, 30.0]},
        workers=workers,
        out_dir=str(tmp_path))


class TestSegmentation:
    """Disjoint 60 s segments."""

    def test_segments(self, make_trial):
        trial = make_trial(num_samples=3000)
        segments = segment_dataset([trial], 60.0)
        assert [segment.start for segment in segments] == [0, 1200]
        assert [len(segment.view) for segment in segments] == [1200, 1200]
        assert segments[1].key == ('s00', 't0', 1200, 2400)

    def test_short_trial_is_skipped(self, make_trial):
        with pytest.warns(UserWarning):
            segments = segment_dataset([make_trial(num_samples=400)], 60.0)
        assert segments == []

    def test_invalid_length(self, make_trial):
        with pytest.raises(ParameterError):
            segment_dataset([make_trial()], 0.0)


class TestLosoCv:
    """Leave-one-segment-out accuracy curves."""

    def test_oracle(self, subject_segments):
        curve = run_loso_cv(AlgorithmConfig('oracle'), subject_segments, [30.0, 1.0])
        assert curve.taus == [1.0, 30.0]
        assert curve.accuracies == [100.0, 100.0]
        assert [point.n_decisions for point in curve.points] == [240, 8]
        assert curve.subject_id == 's00'
        assert curve.algorithm == 'oracle'

    def test_anti_oracle(self, subject_segments):
        curve = run_loso_cv(AlgorithmConfig('anti_oracle'), subject_segments, [1.0, 30.0])
        assert curve.accuracies == [0.0, 0.0]

    def test_coin_flip(self, subject_segments):
        curve = run_loso_cv(AlgorithmConfig('coin_flip', seed=7), subject_segments, [1.0])
        lo, hi = binomial_interval(240, 0.5, 0.999)
        assert lo <= curve.accuracies[0] <= hi
        again = run_loso_cv(AlgorithmConfig('coin_flip', seed=7), subject_segments, [1.0])
        assert again == curve

    def test_held_out_segment_is_never_fitted(self, subject_segments):
        decoders = []

        def factory():
            decoders.append(RecordingDecoder())
            return decoders[-1]

        run_loso_cv(factory, subject_segments, [10.0])
        assert len(decoders) == len(subject_segments)
        for k, decoder in enumerate(decoders):
            assert subject_segments[k].key not in decoder.fitted
            assert len(set(decoder.fitted)) == len(subject_segments) - 1

    def test_held_out_data_does_not_change_the_fit(self, subject_segments):
        def fold_zero_digest(segments):
            decoders = []

            def factory():
                decoders.append(MmseDecoder(flavor='avgcorr', lambda_grid=[1e-3]))
                return decoders[-1]

            run_loso_cv(factory, segments, [10.0])
            return weights_digest(decoders[0].decoder.weights)

        view = subject_segments[0].view
        altered = view.replace(eeg=view.eeg.with_data(3.0 * view.eeg.data + 1.0))
        changed = [Segment(altered, 0)] + list(subject_segments[1:])
        assert fold_zero_digest(changed) == fold_zero_digest(subject_segments)

    def test_fold_error(self, subject_segments):
        with pytest.raises(FoldError) as info:
            run_loso_cv(FailingDecoder, subject_segments, [10.0])
        assert info.value.subject_id == 's00'
        assert info.value.fold == 0

    def test_one_segment(self, subject_segments):
        with pytest.raises(InsufficientDataError):
            run_loso_cv(AlgorithmConfig('oracle'), subject_segments[:1], [10.0])

    def test_window_longer_than_segment(self, subject_segments):
        with pytest.raises(ParameterError):
            run_loso_cv(AlgorithmConfig('oracle'), subject_segments, [61.0])


class TestEvaluation:
    """Per-subject evaluation and full runs."""

    def test_short_recordings_are_reported(self, make_trial):
        trials = [make_trial(num_samples=640, fs=64.0)]
        with pytest.warns(UserWarning):
            result = evaluate_subject(AlgorithmConfig('oracle'), trials, EvaluationConfig(taus=[10.0]))
        assert result.curve is None
        assert result.error is not None

    def test_run_writes_results(self, tmp_path):
        config = _run_config(tmp_path, [{'algorithm_name': 'oracle'}, {'algorithm_name': 'coin_flip'}])
        result = run_evaluation(config, progress=False)
        assert len(result.curves) == 4
        assert result.failures == []
        for name in (CURVES_FILE, MESD_FILE, MANIFEST_FILE):
            assert os.path.isfile(tmp_path / name)
        curves = read_curves(str(tmp_path / CURVES_FILE))
        oracle = [curve for curve in curves if curve.algorithm == 'oracle']
        assert all(curve.accuracies == [100.0, 100.0] for curve in oracle)
        with open(tmp_path / MANIFEST_FILE) as f:
            manifest = json.load(f)
        assert manifest['seed'] == config.seed
        assert manifest['taus'] == [10.0, 30.0]
        assert manifest['failures'] == []
        assert len(manifest['dataset_sha256']) == 64

    @pytest.mark.slow
    def test_results_do_not_depend_on_workers(self, tmp_path):
        algorithms = [{'algorithm_name': 'coin_flip'}, {'algorithm_name': 'mmse_avgcorr_ridge'}]
        single = run_evaluation(_run_config(tmp_path / 'one', algorithms), progress=False)
        parallel = run_evaluation(_run_config(tmp_path / 'two', algorithms, workers=2), progress=False)
        assert len(single.curves) == 4
        assert single.curves == parallel.curves
        assert (tmp_path / 'one' / CURVES_FILE).read_bytes() == (tmp_path / 'two' / CURVES_FILE).read_bytes()
