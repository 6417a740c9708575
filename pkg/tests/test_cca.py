import numpy as np
import pytest

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.models.auto import AutoDecoder
from aadbench.models.cca import (
    CcaDecoder, cca_correlations, cca_stats, decide_from_correlations, envelope_design, fit_cca, fit_pca,
    pca_reduce, sum_cca_stats)
from aadbench.models.lda import LdaClassifier
from aadbench.utils.exceptions import IllConditionedError
from aadbench.utils.signals.base import MultiChannel, Signal
from aadbench.utils.signals.lags import ANTI_CAUSAL, CAUSAL, build_lagged, intersect_designs


def _recording(rng, num_samples=600, n_channels=4):
    envelope = rng.standard_normal(num_samples)
    eeg = rng.standard_normal((num_samples, n_channels))
    eeg[:, 0] += envelope
    eeg[1:, 1] += 0.5 * envelope[:-1]
    return MultiChannel(eeg, 20.0), Signal(envelope, 20.0)


def _canonical_correlations(X, Y):
    """ Reference: singular values of the product of orthonormal bases of the centred data. """
    Qx, _ = np.linalg.qr(X - X.mean(axis=0))
    Qy, _ = np.linalg.qr(Y - Y.mean(axis=0))
    return np.linalg.svd(Qx.T @ Qy, compute_uv=False)


class TestCca:
    """Canonical directions of lagged EEG and envelope designs."""

    def test_matches_reference(self, rng):
        eeg, envelope = _recording(rng)
        Xeeg, Xenv = build_lagged(eeg, 2, ANTI_CAUSAL), build_lagged(envelope, 3, CAUSAL)
        model = fit_cca(Xeeg, Xenv)
        X, Y = intersect_designs(Xeeg, Xenv)
        expected = _canonical_correlations(X.matrix, Y.matrix)
        assert model.J == 3
        np.testing.assert_allclose(model.train_correlations, expected[:3], atol=1e-8)

    def test_correlations_in_unit_interval(self, rng):
        eeg, envelope = _recording(rng)
        model = fit_cca(build_lagged(eeg, 2, ANTI_CAUSAL), build_lagged(envelope, 3, CAUSAL))
        assert np.all(model.train_correlations >= 0)
        assert np.all(model.train_correlations <= 1)
        assert np.all(np.diff(model.train_correlations) <= 1e-12)

    def test_outputs_reproduce_training_correlations(self, rng):
        eeg, envelope = _recording(rng)
        Xeeg, Xenv = build_lagged(eeg, 2, ANTI_CAUSAL), build_lagged(envelope, 3, CAUSAL)
        model = fit_cca(Xeeg, Xenv)
        rho, degenerate = cca_correlations(model, Xeeg, Xenv)
        np.testing.assert_allclose(rho, model.train_correlations, atol=1e-8)
        assert not degenerate

    def test_invariant_to_channel_mixing(self, rng):
        eeg, envelope = _recording(rng)
        mixing = rng.standard_normal((4, 4)) + 4 * np.eye(4)
        Xenv = build_lagged(envelope, 3, CAUSAL)
        base = fit_cca(build_lagged(eeg, 2, ANTI_CAUSAL), Xenv)
        mixed = fit_cca(build_lagged(eeg.with_data(eeg.data @ mixing), 2, ANTI_CAUSAL), Xenv)
        np.testing.assert_allclose(mixed.train_correlations, base.train_correlations, atol=1e-8)

    def test_statistics_are_additive(self, rng):
        eeg, envelope = _recording(rng)
        Xeeg, Xenv = build_lagged(eeg, 2, ANTI_CAUSAL), build_lagged(envelope, 1, CAUSAL)
        whole = cca_stats(Xeeg, Xenv)
        parts = sum_cca_stats([cca_stats(Xeeg.restrict(0, 300), Xenv.restrict(0, 300)),
                               cca_stats(Xeeg.restrict(300, 600), Xenv.restrict(300, 600))])
        for a, b in zip(whole.covariances(), parts.covariances()):
            np.testing.assert_allclose(a, b, atol=1e-10)

    def test_duplicate_channel_is_ill_conditioned(self, rng):
        eeg, envelope = _recording(rng)
        data = np.column_stack([eeg.data, eeg.data[:, 0]])
        with pytest.raises(IllConditionedError):
            fit_cca(build_lagged(MultiChannel(data, 20.0), 1, ANTI_CAUSAL), build_lagged(envelope, 2, CAUSAL))

    def test_padded_envelope_design(self):
        design = envelope_design(Signal(np.arange(1.0, 6.0), 20.0), 3, pad=True)
        assert design.first_index == 0
        assert design.rows == 5
        np.testing.assert_array_equal(design.matrix[0], [1.0, 0.0, 0.0])
        np.testing.assert_array_equal(design.matrix[2], [3.0, 2.0, 1.0])


class TestPca:
    """Principal component reduction of the EEG."""

    def test_component_count(self, rng):
        data = rng.standard_normal((300, 5))
        basis = fit_pca([data], 2)
        assert basis.n_components == 2
        np.testing.assert_allclose(basis.components.T @ basis.components, np.eye(2), atol=1e-12)

    def test_full_variance_keeps_rank(self, rng):
        data = rng.standard_normal((300, 3))
        data = np.column_stack([data, data[:, 0] + data[:, 1]])
        with pytest.warns(UserWarning):
            basis = fit_pca([data], 1.0)
        assert basis.n_components == 3

    def test_reduce_with_training_basis(self, rng):
        train = MultiChannel(rng.standard_normal((200, 4)), 20.0)
        test = MultiChannel(rng.standard_normal((100, 4)), 20.0)
        _, basis = pca_reduce(train, 3)
        reduced, same = pca_reduce(test, basis=basis)
        assert same is basis
        assert reduced.n_channels == 3
        assert reduced.channel_labels == ['pc1', 'pc2', 'pc3']


class TestDecision:
    """LDA on correlation differences."""

    def test_two_speakers(self):
        lda = LdaClassifier(np.array([1.0, 1.0]), 0.0)
        decision = decide_from_correlations(lda, [np.array([0.1, 0.2]), np.array([0.3, 0.4])])
        assert decision.speaker == 1

    def test_round_robin(self):
        lda = LdaClassifier(np.array([1.0]), 0.0)
        decision = decide_from_correlations(lda, [np.array([0.1]), np.array([0.5]), np.array([0.3])])
        assert decision.speaker == 1


class TestCcaDecoder:
    """CCA with an out-of-sample LDA on synthetic recordings."""

    def test_decodes_synthetic_attention(self, linear_segments):
        train, test = linear_segments
        decoder = CcaDecoder(inner_folds=3).fit(train, 200)
        assert 1 <= decoder.model.J <= 4 * decoder.L
        for segment in test:
            decisions = decoder.decide_segment(segment, 200)
            assert len(decisions) == 6
            assert sum(decision.speaker == segment.attended for decision in decisions) >= 5

    def test_save_and_load(self, linear_segments, tmp_path):
        train, _ = linear_segments
        decoder = CcaDecoder(inner_folds=3, max_components=2).fit(train, 200)
        decoder.save_pretrained(str(tmp_path))
        loaded = CcaDecoder.load_pretrained(str(tmp_path))
        assert loaded.model.J == decoder.model.J <= 2
        np.testing.assert_allclose(loaded.model.Wx, decoder.model.Wx, rtol=1e-5, atol=1e-7)
        np.testing.assert_allclose(loaded.lda.weights, decoder.lda.weights, rtol=1e-5, atol=1e-7)
        np.testing.assert_allclose(loaded.model.pca_basis.components, decoder.model.pca_basis.components,
                                   rtol=1e-5, atol=1e-7)

    def test_from_config(self):
        decoder = AutoDecoder.from_config(AlgorithmConfig('cca', pca_space='lag', pca_var_keep=10), inner_folds=4)
        assert isinstance(decoder, CcaDecoder)
        assert (decoder.L, decoder.La) == (5, 25)
        assert decoder.inner_folds == 4
        assert decoder.hyperparameter_grid() == []
