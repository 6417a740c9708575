import numpy as np
import pandas as pd
import pytest

from aadbench.utils.evaluators.report import (
    AGGREGATE_CURVES_FILE, AGGREGATE_MESD_FILE, CURVES_FILE, aggregate_curves, aggregate_mesd, censored_median,
    curve_report, read_curves, read_mesd, report, write_mesd)
from aadbench.utils.exceptions import DatasetError, ParameterError
from aadbench.utils.metrics.curve import CurvePoint, PerformanceCurve
from aadbench.utils.metrics.mesd import mesd


@pytest.fixture
def curves():
    return [
        PerformanceCurve('s00', 'cca', [CurvePoint(1.0, 100 / 3, 60), CurvePoint(2.5, 160 / 3, 24)]),
        PerformanceCurve('s01', 'cca', [CurvePoint(1.0, 55.0, 60), CurvePoint(2.5, 95.0, 24)]),
        PerformanceCurve('s00', 'oracle', [CurvePoint(1.0, 100.0, 60), CurvePoint(2.5, 100.0, 24)]),
    ]


class TestResultFiles:
    """Per-subject tables."""

    def test_curves_round_trip(self, curves, tmp_path):
        paths = curve_report(curves, str(tmp_path))
        assert read_curves(paths['curves']) == curves

    def test_unbounded_mesd_is_written_as_text(self, curves, tmp_path):
        results = [mesd(curve) for curve in curves]
        path = write_mesd(curves, results, str(tmp_path / 'mesd.csv'))
        frame = read_mesd(path)
        assert frame['mesd'].tolist()[0] == '>50.0'
        assert frame['mesd'].tolist()[2] == '1'
        assert frame['status'].tolist()[0] == 'unbounded'

    def test_mesd_results_must_match_curves(self, curves, tmp_path):
        with pytest.raises(ParameterError):
            write_mesd(curves, [mesd(curves[0])], str(tmp_path / 'mesd.csv'))

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetError):
            read_curves(str(tmp_path / CURVES_FILE))


class TestAggregation:
    """Summaries across subjects."""

    @pytest.mark.parametrize('values, expected', [
        ([3.0, 5.0, np.inf], 5.0),
        ([3.0, np.inf], np.inf),
        ([3.0, 5.0], 4.0),
        ([np.inf, np.inf, 1.0], np.inf),
    ])
    def test_censored_median(self, values, expected):
        assert censored_median(values) == expected

    def test_mean_and_standard_error(self, curves):
        frame = aggregate_curves(curves)
        row = frame[(frame['algorithm'] == 'cca') & (frame['tau'] == 2.5)].iloc[0]
        assert row['mean'] == pytest.approx((160 / 3 + 95.0) / 2)
        assert row['se'] == pytest.approx(np.std([160 / 3, 95.0], ddof=1) / np.sqrt(2))
        assert row['n_subjects'] == 2
        assert row['n_decisions'] == 48

    def test_single_subject_has_no_standard_error(self, curves, tmp_path):
        curve_report(curves, str(tmp_path))
        paths = report(str(tmp_path))
        frame = pd.read_csv(paths['aggregate_curves'], keep_default_na=False)
        oracle = frame[frame['algorithm'] == 'oracle']
        assert oracle['se'].tolist() == ['NA', 'NA']

    def test_median_mesd_counts_censored(self, curves):
        results = [mesd(curve) for curve in curves]
        frame = aggregate_mesd(pd.DataFrame({
            'algorithm': [curve.algorithm for curve in curves],
            'mesd_seconds': [result.mesd_seconds for result in results],
            'status': [result.status for result in results],
            'bound': [result.bound for result in results],
        }))
        cca = frame[frame['algorithm'] == 'cca'].iloc[0]
        assert cca['n_censored'] == 1
        assert cca['median'] == '>50.0'
        oracle = frame[frame['algorithm'] == 'oracle'].iloc[0]
        assert oracle['median_seconds'] == pytest.approx(1.0)

    def test_report_writes_aggregates(self, curves, tmp_path):
        curve_report(curves, str(tmp_path), [mesd(curve) for curve in curves])
        paths = report(str(tmp_path))
        assert paths['aggregate_curves'].endswith(AGGREGATE_CURVES_FILE)
        assert paths['aggregate_mesd'].endswith(AGGREGATE_MESD_FILE)

    def test_report_without_curves(self, tmp_path):
        with pytest.raises(DatasetError):
            report(str(tmp_path))
