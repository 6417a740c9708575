import numpy as np
import pytest

from aadbench.configs.preprocessing import PreprocessingConfig
from aadbench.utils.exceptions import InsufficientDataError, ParameterError, UnsupportedRateError
from aadbench.utils.signals.base import MultiChannel, Signal, Trial
from aadbench.utils.signals.correlation import pearson, pearson_columns
from aadbench.utils.signals.envelope import gammatone_envelope
from aadbench.utils.signals.filters import bandpass, highpass, intermediate_rate, rate_ratio, resample, resample_staged
from aadbench.utils.signals.lags import ANTI_CAUSAL, CAUSAL, build_lagged, intersect_designs
from aadbench.utils.signals.preprocessing import NormalizationStats, filter_trial, normalize_folds, preprocess


class TestContainers:
    """Validation of Signal, MultiChannel and Trial."""

    def test_rejects_nan(self):
        with pytest.raises(ParameterError):
            Signal(np.array([0.0, np.nan, 1.0]), 20.0)

    def test_samples_are_read_only(self):
        sig = Signal(np.arange(5.0), 20.0)
        with pytest.raises(ValueError):
            sig.samples[0] = 1.0

    def test_trial_requires_equal_lengths(self):
        eeg = MultiChannel(np.zeros((10, 2)), 20.0)
        with pytest.raises(ParameterError):
            Trial(eeg, [Signal(np.zeros(10), 20.0), Signal(np.zeros(9), 20.0)], 0, 's00')

    def test_trial_requires_two_speakers(self):
        eeg = MultiChannel(np.zeros((10, 2)), 20.0)
        with pytest.raises(ParameterError):
            Trial(eeg, [Signal(np.zeros(10), 20.0)], 0, 's00')

    def test_slice_keeps_offset(self, make_trial):
        trial = make_trial(num_samples=100)
        view = trial.slice(20, 60).slice(5, 15)
        assert view.offset == 25
        assert len(view) == 10
        assert view.key == ('s00', 't0', 25, 35)
        np.testing.assert_array_equal(view.eeg.data, trial.eeg.data[25:35])


class TestLaggedDesign:
    """Layout of anti-causal and causal designs."""

    def test_anti_causal_rows(self):
        data = np.arange(20.0).reshape(10, 2)
        design = build_lagged(MultiChannel(data, 10.0), 3, ANTI_CAUSAL)
        assert design.matrix.shape == (8, 6)
        assert design.first_index == 0
        # channel-major: all lags of channel 1, then all lags of channel 2
        np.testing.assert_array_equal(design.matrix[4], [data[4, 0], data[5, 0], data[6, 0],
                                                         data[4, 1], data[5, 1], data[6, 1]])

    def test_causal_rows(self):
        x = Signal(np.arange(6.0), 10.0)
        design = build_lagged(x, 3, CAUSAL)
        assert design.first_index == 2
        np.testing.assert_array_equal(design.matrix[0], [2.0, 1.0, 0.0])
        np.testing.assert_array_equal(design.align(x), [2.0, 3.0, 4.0, 5.0])

    def test_too_many_lags(self):
        with pytest.raises(InsufficientDataError):
            build_lagged(Signal(np.arange(4.0), 10.0), 5)

    def test_intersect(self):
        x = Signal(np.arange(10.0), 10.0)
        anti = build_lagged(x, 3, ANTI_CAUSAL)
        causal = build_lagged(x, 4, CAUSAL)
        a, c = intersect_designs(anti, causal)
        assert a.first_index == c.first_index == 3
        assert a.rows == c.rows == 5


class TestPearson:
    """Correlation coefficient and its degenerate cases."""

    def test_linear(self, rng):
        a = rng.standard_normal(50)
        assert pearson(a, 3 * a + 1) == pytest.approx(1.0)
        assert pearson(a, -a) == pytest.approx(-1.0)

    def test_constant_is_degenerate(self, rng):
        rho, degenerate = pearson(np.ones(20), rng.standard_normal(20), return_degenerate=True)
        assert rho == 0.0
        assert degenerate

    def test_matches_numpy(self, rng):
        a, b = rng.standard_normal(100), rng.standard_normal(100)
        assert pearson(a, b) == pytest.approx(np.corrcoef(a, b)[0, 1], abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ParameterError):
            pearson(np.arange(3.0), np.arange(4.0))

    def test_columns(self, rng):
        A = rng.standard_normal((40, 3))
        B = A.copy()
        B[:, 2] = 1.0
        rho, flags = pearson_columns(A, B)
        np.testing.assert_allclose(rho[:2], 1.0)
        assert rho[2] == 0.0
        assert list(flags) == [False, False, True]


class TestFilters:
    """Resampling and band filtering."""

    def test_rate_ratio(self):
        ratio = rate_ratio(64.0, 20.0)
        assert (ratio.numerator, ratio.denominator) == (5, 16)

    def test_upsampling_is_unsupported(self):
        with pytest.raises(UnsupportedRateError):
            rate_ratio(20.0, 64.0)

    def test_resample_length(self, rng):
        sig = Signal(rng.standard_normal(640), 64.0)
        out = resample(sig, 20.0)
        assert out.fs == 20.0
        assert len(out) == 200

    def test_resample_keeps_constant(self):
        out = resample(Signal(np.full(640, 2.5), 64.0), 20.0)
        np.testing.assert_allclose(out.samples, 2.5, atol=1e-9)

    @pytest.mark.parametrize('fs', [44100.0, 22050.0])
    def test_audio_rates_resample_in_two_stages(self, fs):
        sig = Signal(np.full(int(fs), 2.5), fs)
        with pytest.raises(UnsupportedRateError):
            resample(sig, 64.0)
        fs_mid = intermediate_rate(fs, 64.0)
        assert 64.0 < fs_mid < fs and fs_mid % 64.0 == 0
        out = resample_staged(sig, 64.0)
        assert out.fs == 64.0
        assert len(out) == 64
        np.testing.assert_allclose(out.samples, 2.5, atol=1e-6)

    def test_staged_resample_is_direct_when_supported(self, rng):
        sig = Signal(rng.standard_normal(640), 64.0)
        np.testing.assert_array_equal(resample_staged(sig, 20.0).samples, resample(sig, 20.0).samples)
        with pytest.raises(UnsupportedRateError):
            resample_staged(sig, 128.0)

    def test_fft_bandpass_removes_out_of_band_tones(self):
        fs, n = 20.0, 2000
        t = np.arange(n) / fs
        in_band = np.sin(2 * np.pi * 4.0 * t)
        sig = Signal(in_band + np.sin(2 * np.pi * 0.2 * t) + 0.5, fs)
        out = bandpass(sig, 1.0, 9.0)
        np.testing.assert_allclose(out.samples, in_band, atol=1e-9)

    def test_fft_bandpass_is_idempotent(self, rng):
        sig = MultiChannel(rng.standard_normal((500, 2)), 20.0)
        once = bandpass(sig, 1.0, 9.0)
        twice = bandpass(once, 1.0, 9.0)
        np.testing.assert_allclose(twice.data, once.data, atol=1e-12)

    def test_butter_attenuates_dc(self, rng):
        sig = Signal(rng.standard_normal(2000) + 10.0, 20.0)
        out = bandpass(sig, 1.0, 9.0, method='butter')
        assert abs(out.samples.mean()) < 0.1

    def test_highpass(self):
        out = highpass(Signal(np.full(256, 3.0), 64.0), 1.0)
        np.testing.assert_allclose(out.samples, 0.0, atol=1e-12)

    @pytest.mark.parametrize('band', [(0.0, 5.0), (5.0, 1.0), (1.0, 10.0)])
    def test_invalid_band(self, band):
        with pytest.raises(ParameterError):
            bandpass(Signal(np.zeros(100), 20.0), *band)


class TestEnvelope:
    """Gammatone powerlaw envelope."""

    def test_scaling(self, rng):
        audio = Signal(rng.standard_normal(8000), 16000.0)
        base = gammatone_envelope(audio, num_bands=4, f_lo=100.0, f_hi=4000.0)
        scaled = gammatone_envelope(audio.with_samples(4.0 * audio.samples), num_bands=4, f_lo=100.0, f_hi=4000.0)
        np.testing.assert_allclose(scaled.samples, 4.0 ** 0.6 * base.samples, rtol=1e-9, atol=1e-12)
        assert np.all(base.samples >= 0)

    def test_rate_too_low(self):
        with pytest.raises(ParameterError):
            gammatone_envelope(Signal(np.zeros(100), 8000.0))


class TestPreprocessing:
    """Filtering and train-only normalisation."""

    def test_filter_trial_rate(self, make_trial):
        trial = make_trial(num_samples=640, fs=64.0)
        out = filter_trial(trial, PreprocessingConfig(fs=20.0, f_lo=1.0, f_hi=9.0))
        assert out.fs == 20.0
        assert len(out) == 200
        assert out.envelopes[0].fs == 20.0

    def test_preprocess_rejects_low_rate(self, make_trial):
        with pytest.raises(ParameterError):
            preprocess(make_trial(fs=20.0), PreprocessingConfig(fs=20.0, f_lo=1.0, f_hi=9.0))

    def test_normalisation_uses_training_statistics(self, make_trial):
        train = [make_trial(num_samples=300, trial_id='a'), make_trial(num_samples=300, trial_id='b')]
        test = make_trial(num_samples=300, trial_id='c')
        train_n, (test_n,), stats = normalize_folds(train, [test])
        pooled = np.concatenate([t.eeg.data for t in train_n])
        np.testing.assert_allclose(pooled.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(pooled.std(axis=0), 1.0, atol=1e-12)
        expected = (test.eeg.data - stats.eeg_mean) / stats.eeg_std
        np.testing.assert_allclose(test_n.eeg.data, expected)
        assert test_n.normalization is stats

    def test_channel_mismatch(self, make_trial):
        stats = NormalizationStats.fit([make_trial(n_channels=3)])
        with pytest.raises(ParameterError):
            stats.apply(make_trial(n_channels=4))
