import os
import json

import pytest

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.configs.evaluation import EvaluationConfig
from aadbench.configs.logger import LoggerConfig
from aadbench.configs.preprocessing import PreprocessingConfig
from aadbench.configs.run import RunConfig
from aadbench.configs.synth import SynthConfig
from aadbench.configs.trainer import TrainerConfig
from aadbench.models.auto import AutoDecoder
from aadbench.utils.exceptions import ConfigError
from aadbench.utils.loggers.auto import AutoLogger
from aadbench.utils.runtime import flatten


class TestConfigs:
    """Loading and validating configuration files."""

    def test_algorithm_file(self, tmp_path):
        (tmp_path / 'config.json').write_text(json.dumps({'algorithm_name': 'cca', 'pca_space': 'lag'}))
        config = AlgorithmConfig.from_config_file(str(tmp_path))
        assert config.name == 'cca'
        assert config.pca_space == 'lag'

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            AlgorithmConfig.from_config_file(str(tmp_path))

    def test_invalid_json(self, tmp_path):
        (tmp_path / 'config.json').write_text("{not json")
        with pytest.raises(ConfigError):
            AlgorithmConfig.from_config_file(str(tmp_path))

    @pytest.mark.parametrize('kwargs', [
        {'algorithm_name': 'svm'}, {'algorithm_name': 'cca', 'lags': 0.0},
        {'algorithm_name': 'mmse_avgcorr_ridge', 'lambda_grid': [0.1, 0.01]},
        {'algorithm_name': 'cca', 'pca_var_keep': 1.5}, {'algorithm_name': 'mmse_adap_lasso', 'marker': 'energy'}])
    def test_invalid_algorithm(self, kwargs):
        with pytest.raises(ConfigError):
            AlgorithmConfig(**kwargs)

    @pytest.mark.parametrize('kwargs', [{'taus': []}, {'taus': [5.0, 1.0]}, {'taus': [90.0]}, {'inner_folds': 1}])
    def test_invalid_evaluation(self, kwargs):
        with pytest.raises(ConfigError):
            EvaluationConfig(**kwargs)

    def test_run_resolves_algorithm_paths(self, tmp_path):
        algorithm_dir = tmp_path / 'algorithms' / 'oracle'
        algorithm_dir.mkdir(parents=True)
        (algorithm_dir / 'config.json').write_text(json.dumps({'algorithm_name': 'oracle'}))
        (tmp_path / 'run.json').write_text(json.dumps({
            'dataset': {'dataset_name': 'synthetic'},
            'algorithms': ['algorithms/oracle', {'algorithm_name': 'coin_flip', 'name': 'coin'}],
        }))
        config = RunConfig.from_config_file(str(tmp_path / 'run.json'))
        assert [algorithm.name for algorithm in config.algorithms] == ['oracle', 'coin']
        assert config.evaluation.taus == [1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 60.0]

    def test_run_rejects_duplicate_names(self):
        with pytest.raises(ConfigError):
            RunConfig(dataset={'dataset_name': 'synthetic'},
                      algorithms=[{'algorithm_name': 'oracle'}, {'algorithm_name': 'oracle'}])

    @pytest.mark.parametrize('name', ['mmse_avgdec_lasso', 'cca', 'mmse_adap_lasso', 'nn_sr', 'coin_flip'])
    def test_every_algorithm_builds(self, name):
        decoder = AutoDecoder.from_config(AlgorithmConfig(name))
        assert decoder.tuning in ('global', 'per_tau', 'training_accuracy', 'none')


class TestLoggers:

    def test_disabled_logger_is_a_no_op(self):
        logger = AutoLogger.from_config(LoggerConfig(display_name='run'))
        assert logger.display_name == 'run'
        logger.store_configs(LoggerConfig())
        logger.init_run()
        logger.log({'loss': 1.0})
        logger.log_curves([{'tau': 1.0}])
        logger.log_diagnostics('nn_sr', [{'epoch': 1, 'train_loss': 0.5}])
        logger.finish()
        assert logger.run is None
        assert logger.config['loggerconfig']['project'] == 'aadbench'

    def test_unknown_logger(self):
        with pytest.raises(ConfigError):
            LoggerConfig(logger_name='tensorboard')

    def test_flatten(self):
        assert flatten({'a': {'b': 1, 'c': {'d': 2}}, 'e': 3}) == {'a_b': 1, 'a_c_d': 2, 'e': 3}


class TestCommittedConfigs:
    """Every configuration shipped under configs/ loads."""

    ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

    @pytest.mark.parametrize('kind, config_class', [
        ('algorithms', AlgorithmConfig), ('preprocessing', PreprocessingConfig), ('synth', SynthConfig),
        ('trainers', TrainerConfig), ('evaluation', EvaluationConfig), ('loggers', LoggerConfig)])
    def test_directory(self, kind, config_class):
        directory = os.path.join(self.ROOT, 'configs', kind)
        names = sorted(os.listdir(directory))
        assert len(names) > 0
        for name in names:
            assert isinstance(config_class.from_config_file(os.path.join(directory, name)), config_class)

    @pytest.mark.parametrize('name', ['default', 'smoke'])
    def test_runs(self, name, monkeypatch):
        monkeypatch.chdir(self.ROOT)
        config = RunConfig.from_config_file(os.path.join('configs', 'runs', name))
        assert len(config.algorithms) >= 4
