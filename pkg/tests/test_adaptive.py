import numpy as np
import pytest

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.models.adaptive import AdaptiveLassoDecoder, ChannelSubset, adap_decide, write_diagnostics
from aadbench.models.auto import AutoDecoder
from aadbench.utils.exceptions import ParameterError
from aadbench.utils.signals.base import MultiChannel, Signal


def _window(rng, num_samples=400):
    attended = rng.standard_normal(num_samples)
    other = rng.standard_normal(num_samples)
    eeg = 0.3 * rng.standard_normal((num_samples, 3))
    eeg[:, 0] += attended
    return MultiChannel(eeg, 20.0), [Signal(attended, 20.0), Signal(other, 20.0)]


class TestChannelSubset:
    """Channel selection by label or position."""

    def test_none_selects_all(self):
        subset = ChannelSubset.resolve(None, ['Fz', 'Cz', 'Pz'])
        assert subset.indices == [0, 1, 2]

    def test_labels_and_positions(self):
        subset = ChannelSubset.resolve(['Pz', 0], ['Fz', 'Cz', 'Pz'])
        assert subset.indices == [2, 0]
        assert subset.labels == ['Pz', 'Fz']

    @pytest.mark.parametrize('selection', [['Oz'], [3], [0, 'Fz'], []])
    def test_invalid(self, selection):
        with pytest.raises(ParameterError):
            ChannelSubset.resolve(selection, ['Fz', 'Cz', 'Pz'])


class TestAdapDecide:
    """Per-window lasso decoders for every speaker."""

    @pytest.mark.parametrize('marker', ['l1', 'correlation'])
    def test_attended_speaker_wins(self, rng, marker):
        eeg, envelopes = _window(rng)
        result = adap_decide(eeg, envelopes, 0.3, 2, marker=marker)
        assert result.decision.speaker == 0
        assert len(result.decoders) == 2
        assert all(result.converged)

    def test_norms_are_l1(self, rng):
        eeg, envelopes = _window(rng)
        result = adap_decide(eeg, envelopes, 0.3, 2)
        for decoder, norm in zip(result.decoders, result.norms):
            assert norm == pytest.approx(np.sum(np.abs(decoder.weights)))

    def test_all_zero_is_degenerate(self, rng):
        eeg, envelopes = _window(rng)
        result = adap_decide(eeg, envelopes, 1.0, 2)
        assert result.decision.degenerate
        assert result.decision.speaker == 0

    def test_unknown_marker(self, rng):
        eeg, envelopes = _window(rng)
        with pytest.raises(ParameterError):
            adap_decide(eeg, envelopes, 0.3, 2, marker='energy')


class TestAdaptiveLassoDecoder:
    """Training-accuracy tuning and per-window decisions."""

    def test_selects_from_grid(self, linear_segments):
        train, _ = linear_segments
        decoder = AdaptiveLassoDecoder(lambda_grid=[0.01, 0.3, 1.0], max_tuning_windows=6)
        decoder.fit(train, 200)
        assert decoder.hyperparameter in (0.01, 0.3, 1.0)
        assert decoder.tuning == 'training_accuracy'

    def test_tuning_windows_are_capped(self, linear_segments):
        train, _ = linear_segments
        decoder = AdaptiveLassoDecoder(max_tuning_windows=4)
        assert len(decoder._tuning_windows(train, 200)) == 4
        assert len(AdaptiveLassoDecoder()._tuning_windows(train, 200)) == 18

    def test_diagnostics(self, linear_segments, tmp_path):
        train, test = linear_segments
        decoder = AdaptiveLassoDecoder(lambda_grid=[0.1], channel_subset=[0, 1])
        decoder.fit(train, 200)
        decisions = decoder.decide_segment(test[0], 200)
        assert len(decoder.diagnostics) == len(decisions) == 6
        row = decoder.diagnostics[0]
        assert row['lambda'] == 0.1
        assert {'l1_0', 'l1_1', 'marker_0', 'converged_1'} <= set(row)
        path = tmp_path / 'diagnostics.csv'
        write_diagnostics(decoder.diagnostics, str(path))
        assert path.read_text().splitlines()[0].startswith('subject,trial,start')

    def test_from_config(self):
        config = AlgorithmConfig('mmse_adap_lasso', marker='correlation', channel_subset=['ch1'])
        decoder = AutoDecoder.from_config(config)
        assert isinstance(decoder, AdaptiveLassoDecoder)
        assert decoder.marker == 'correlation'
        assert decoder.channel_selection == ['ch1']
