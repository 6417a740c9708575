import os
import json

from typing import Any, Dict, List, Optional, Union
from typing_extensions import Self

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.configs.base import Config, CONFIG_NAME
from aadbench.configs.dataset import DatasetConfig
from aadbench.configs.evaluation import EvaluationConfig
from aadbench.configs.logger import LoggerConfig
from aadbench.utils.exceptions import ConfigError

AlgorithmEntry = Union[str, Dict[str, Any], AlgorithmConfig]


def _resolve(path: str, base_dir: Optional[str]) -> str:
    if os.path.isabs(path) or base_dir is None or os.path.exists(path):
        return path
    return os.path.join(base_dir, path)


class RunConfig(Config):
    """ One benchmark run: a dataset, the algorithms to compare and the evaluation protocol.

    Algorithm entries are inline dictionaries or paths to algorithm config directories;
    relative paths are resolved against the working directory first, then against the
    directory holding the run config.
    """

    def __init__(
        self,
        dataset: Union[Dict[str, Any], DatasetConfig],
        algorithms: List[AlgorithmEntry],
        evaluation: Optional[Union[Dict[str, Any], EvaluationConfig]] = None,
        logger: Optional[Union[Dict[str, Any], LoggerConfig]] = None,
        seed: int = 1337,
        workers: int = 1,
        out_dir: str = 'results',
        base_dir: Optional[str] = None,
    ):
        super().__init__()
        self._base_dir = base_dir
        if isinstance(dataset, dict):
            dataset = dict(dataset)
            if dataset.get('path') is not None:
                dataset['path'] = _resolve(dataset['path'], base_dir)
            dataset = DatasetConfig.from_dict(dataset)
        self.dataset = dataset
        self.algorithms = [self._algorithm(entry) for entry in algorithms]
        self.evaluation = EvaluationConfig.from_dict(evaluation) if isinstance(evaluation, dict) \
            else (evaluation or EvaluationConfig())
        self.logger = LoggerConfig.from_dict(logger) if isinstance(logger, dict) else logger
        self.seed = seed
        self.workers = workers
        self.out_dir = out_dir
        self._post_init()

    def _algorithm(self, entry: AlgorithmEntry) -> AlgorithmConfig:
        if isinstance(entry, AlgorithmConfig):
            return entry
        if isinstance(entry, str):
            return AlgorithmConfig.from_config_file(_resolve(entry, self._base_dir))
        if isinstance(entry, dict):
            return AlgorithmConfig.from_dict(entry)
        raise ConfigError(f"Invalid field `algorithms`: entries must be paths or objects, got {type(entry).__name__}")

    def _post_init(self):
        self._require(len(self.algorithms) > 0, 'algorithms', "at least one algorithm is required")
        names = [algorithm.name for algorithm in self.algorithms]
        self._require(len(set(names)) == len(names), 'algorithms', f"algorithm names must be unique, got {names}")
        self._require(int(self.workers) == self.workers and self.workers >= 1, 'workers',
                      f"must be a positive integer, got {self.workers}")

    @classmethod
    def from_config_file(cls, config_file_dir: str) -> Self:
        config_path = config_file_dir
        if os.path.isdir(config_file_dir) or not config_file_dir.endswith('.json'):
            config_path = os.path.join(config_file_dir, CONFIG_NAME)
        if not os.path.exists(config_path):
            raise FileNotFoundError(f"Configuration file {config_path} not found.")
        with open(config_path, 'r') as f:
            try:
                config_dict = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"Configuration file {config_path} is not valid JSON: {e}") from e
        config_dict.setdefault('base_dir', os.path.dirname(os.path.abspath(config_path)))
        return cls.from_dict(config_dict)
