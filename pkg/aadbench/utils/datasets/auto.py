""" AutoDataset class for automatic dataset selection based on config.

`directory` loads a dataset directory from disk; `synthetic` generates the
configured forward-model population in memory.
"""

import importlib

from aadbench.configs.dataset import DatasetConfig
from aadbench.utils.datasets.base import BaseDataset
from aadbench.utils.exceptions import ConfigError


class AutoDataset:

    @classmethod
    def from_config(cls, config: DatasetConfig) -> BaseDataset:

        if config.dataset_name == 'directory':
            return getattr(importlib.import_module(
                "aadbench.utils.datasets.directory"),
                "DirectoryDataset").from_config(config)
        elif config.dataset_name == 'synthetic':
            return getattr(importlib.import_module(
                "aadbench.utils.datasets.synthetic"),
                "SyntheticDataset").from_config(config)
        else:
            raise ConfigError(f"Dataset {config.dataset_name} not available.")
