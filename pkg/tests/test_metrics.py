import numpy as np
import pytest

from aadbench.utils.exceptions import ParameterError
from aadbench.utils.metrics.accuracy import accuracy, binomial_interval, chance_level, standard_error
from aadbench.utils.metrics.curve import CurvePoint, PerformanceCurve


class TestAccuracy:

    def test_percentage(self):
        assert accuracy([(0, 0), (1, 0), (1, 1), (0, 1)]) == 50.0
        assert accuracy([(1, 1)]) == 100.0

    def test_empty(self):
        with pytest.raises(ParameterError):
            accuracy([])

    def test_chance_level(self):
        assert chance_level(100) == 58.0
        assert chance_level(100, alpha=0.01) > chance_level(100, alpha=0.05)

    def test_chance_level_invalid(self):
        with pytest.raises(ParameterError):
            chance_level(0)
        with pytest.raises(ParameterError):
            chance_level(10, alpha=1.0)

    def test_binomial_interval(self):
        lo, hi = binomial_interval(100)
        assert lo < 50.0 < hi
        assert binomial_interval(1000)[1] < hi

    def test_standard_error(self):
        assert standard_error([1.0, 2.0, 3.0]) == pytest.approx(1 / np.sqrt(3))
        assert np.isnan(standard_error([70.0]))


class TestPerformanceCurve:

    def test_points_are_sorted(self):
        curve = PerformanceCurve('s00', 'cca', [CurvePoint(10.0, 80.0, 6), CurvePoint(1.0, 60.0, 60)])
        assert curve.taus == [1.0, 10.0]
        assert curve.accuracies == [60.0, 80.0]

    def test_repeated_tau(self):
        with pytest.raises(ParameterError):
            PerformanceCurve('s00', 'cca', [CurvePoint(1.0, 60.0, 60), CurvePoint(1.0, 70.0, 60)])

    def test_accuracy_range(self):
        with pytest.raises(ParameterError):
            PerformanceCurve('s00', 'cca', [CurvePoint(1.0, 101.0, 60)])

    def test_records(self):
        records = PerformanceCurve('s01', 'nn_sr', [CurvePoint(5.0, 75.0, 12)]).to_records()
        assert records == [{'algorithm': 'nn_sr', 'subject': 's01', 'tau': 5.0, 'accuracy': 75.0, 'n_decisions': 12}]
